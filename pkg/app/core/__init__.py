"""Core functionality for VortexLab."""
