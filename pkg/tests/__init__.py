"""Tests for stefan-kit."""
