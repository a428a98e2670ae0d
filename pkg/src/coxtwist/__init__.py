"""Separation and twist machinery for Coxeter diagrams."""
