"""
Configuration and report schemas
"""
