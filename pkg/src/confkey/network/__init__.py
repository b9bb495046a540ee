"""Network topologies, terminal layouts and per-round snapshots."""
