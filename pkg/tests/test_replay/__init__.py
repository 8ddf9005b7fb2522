"""Tests for prioritized causal replay."""
