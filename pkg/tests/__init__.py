"""Tests for latfilter."""
