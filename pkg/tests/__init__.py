"""Tests for the cfequiv estimators, DGPs and run CLI."""
