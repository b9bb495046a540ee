"""Conference-key rates: entropy, leader choice and per-round expectations."""
