"""Utility helpers for epsbm."""
