"""
Stateless numerical kernels for VortexLab.
"""
