"""Built-in oracle checks run by ``confkey validate``."""
