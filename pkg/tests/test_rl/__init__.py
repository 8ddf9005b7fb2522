"""Tests for environments, networks, agents and the trainer."""
