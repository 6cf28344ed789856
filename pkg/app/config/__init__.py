"""
Configuration module for the VortexLab toolkit.
"""
