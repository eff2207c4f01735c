"""Test case generation and differential verification against an exact oracle."""
