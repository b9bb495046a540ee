"""Noisy GHZ distribution: closed-form star results and dense density operators."""
