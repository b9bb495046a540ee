"""Path metrics, star and Steiner-tree search, packing and fixed plans."""
