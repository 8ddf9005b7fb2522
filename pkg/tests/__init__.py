"""Test package for the CIER pipeline."""
