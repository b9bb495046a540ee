"""Round engine, experiments and strategy comparisons."""
