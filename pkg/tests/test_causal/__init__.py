"""Tests for causal discovery and effect estimation."""
