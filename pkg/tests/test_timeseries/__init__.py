"""Tests for time-series segmentation and factor clustering."""
