"""Routing and simulation toolkit for multiparty QKD over repeater networks."""
