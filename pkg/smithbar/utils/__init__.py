"""Utility functions for smithbar."""
