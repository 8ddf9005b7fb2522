"""Tests for data models."""