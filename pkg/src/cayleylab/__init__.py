"""Exact Cayley-graph diameters, product-set growth and structural checks for finite groups."""
