"""Tests for pycarroll."""
