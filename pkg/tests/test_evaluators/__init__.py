"""Tests for evaluator components."""