"""
Named maps and boundary data used by the command line and the self test.
Map presets use the same keys as the problem configuration.
"""


# Disk maps: vortices (x, y, charge) and polynomial phase terms
MAP_PRESETS = {
    "single_vortex": {
        "vortices": [{"x": 0.0, "y": 0.0, "charge": 1}],
        "phase": []
    },
    "blaschke_pair": {
        "vortices": [
            {"x": 0.3, "y": 0.0, "charge": 1},
            {"x": -0.3, "y": 0.0, "charge": -1}
        ],
        "phase": []
    },
    "quadratic_phase": {
        "vortices": [],
        "phase": [
            {"coefficient": 1.0, "x_power": 2, "y_power": 0},
            {"coefficient": 1.0, "x_power": 0, "y_power": 2}
        ]
    },
    "linear_phase": {
        "vortices": [],
        "phase": [{"coefficient": 1.0, "x_power": 1, "y_power": 0}]
    },
    "dressed_vortex": {
        "vortices": [{"x": 0.0, "y": 0.0, "charge": 1}],
        "phase": [
            {"coefficient": 1.0, "x_power": 2, "y_power": 0},
            {"coefficient": 1.0, "x_power": 0, "y_power": 2}
        ]
    },
    "constant": {
        "vortices": [],
        "phase": []
    }
}

# Boundary data g0 = exp(i(degree * theta + sum of lift modes))
BOUNDARY_PRESETS = {
    "identity": {"degree": 1, "modes": []},
    "constant": {"degree": 0, "modes": []},
    "double": {"degree": 2, "modes": []},
    "wobble": {"degree": 1, "modes": [{"k": 2, "cos": 0.0, "sin": 0.3}]},
    "small_sine": {"degree": 0, "modes": [{"k": 1, "cos": 0.0, "sin": 0.1}]},
    "tilted_double": {"degree": 2, "modes": [{"k": 1, "cos": 0.0, "sin": 0.3}]}
}

# Plane configurations: +1 charges at p, -1 charges at q
PLANE_PRESETS = {
    "pair": {"p": [[0.3, 0.0]], "q": [[-0.3, 0.0]]},
    "double_pair": {"p": [[0.3, 0.0], [-0.3, 0.0]], "q": [[0.0, 0.3], [0.0, -0.3]]}
}

# Torus maps: winding pair and vortex list
TORUS_PRESETS = {
    "pure_winding": {"winding": [1, 0], "vortices": [], "terms": []},
    "dipole": {
        "winding": [0, 0],
        "vortices": [
            {"x": 0.3, "y": 0.5, "charge": 1},
            {"x": 0.7, "y": 0.5, "charge": -1}
        ],
        "terms": []
    }
}
