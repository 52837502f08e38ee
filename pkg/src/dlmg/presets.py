"""Named parameter presets reproducing the reference figure data sets.

Each preset is a flat config-key dictionary (same namespace as the config
file); command-line configs override preset values key by key.  Parameter
blocks follow the corresponding figure captions.  Where a caption rounds a
derived microscopic coupling (lambda_a, lambda_b), the preset instead pins
the physical targets (lam, gamma_b) and derives the couplings exactly.
"""

# Canonical normalized parameter sets: second-order study sweeps lam at
# {h=1, Gamma_a=0.01, Gamma_b=0.2}; first-order study sweeps h at
# {lam=1, Gamma_a=0.01, Gamma_b=0.2}.
_SECOND_ORDER = {"h": "1.0", "gamma_a": "0.01", "gamma_b": "0.2"}
_FIRST_ORDER = {"lambda": "1.0", "gamma_a": "0.01", "gamma_b": "0.2"}

_CAVITY = {
    "spectrum.kappa_a": "0.3",
    "spectrum.delta_a": "15.0",
    "spectrum.kappa_b": "15.0",
    "spectrum.delta_b": "0.0",
    "spectrum.gamma_b": "0.05",
}

PRESETS = {
    # Steady-state second-order moments vs lam for N = 25, 50, 100.
    "fig3": {
        "command": "steady",
        **_SECOND_ORDER,
        "n_atoms": "25,50,100",
        "sweep.variable": "lambda",
        "sweep.start": "0.0",
        "sweep.stop": "2.0",
        "sweep.points": "41",
        "outputs": "moments,entanglement,semiclassical",
    },
    # Entanglement witness surface C_phi(lam, phi), N = 100.
    "fig5": {
        "command": "steady",
        **_SECOND_ORDER,
        "n_atoms": "100",
        "sweep.variable": "lambda",
        "sweep.start": "0.0",
        "sweep.stop": "2.0",
        "sweep.points": "41",
        "outputs": "moments,entanglement,cphi",
    },
    # Rescaled concurrence vs lam, N = 100 plus thermodynamic limit.
    "fig7": {
        "command": "steady",
        **_SECOND_ORDER,
        "n_atoms": "100",
        "sweep.variable": "lambda",
        "sweep.start": "0.5",
        "sweep.stop": "1.5",
        "sweep.points": "41",
        "outputs": "moments,entanglement,eigenvalues",
    },
    # Steady-state moments vs h for N = 25, 50, 100 (first-order transition).
    "fig12": {
        "command": "steady",
        **_FIRST_ORDER,
        "n_atoms": "25,50,100",
        "sweep.variable": "h",
        "sweep.start": "-1.0",
        "sweep.stop": "1.0",
        "sweep.points": "81",
        "outputs": "moments,entanglement,semiclassical",
    },
    # C_phi(h, phi) surface, N = 100, lam = 1.
    "fig15": {
        "command": "steady",
        **_FIRST_ORDER,
        "n_atoms": "100",
        "sweep.variable": "h",
        "sweep.start": "-0.5",
        "sweep.stop": "0.5",
        "sweep.points": "41",
        "outputs": "moments,entanglement,cphi",
    },
    # Rescaled concurrence vs h, N = 100 plus thermodynamic limit.
    "fig16": {
        "command": "steady",
        **_FIRST_ORDER,
        "n_atoms": "100",
        "sweep.variable": "h",
        "sweep.start": "-0.5",
        "sweep.stop": "0.5",
        "sweep.points": "41",
        "outputs": "moments,entanglement,eigenvalues",
    },
    # C_R(lam, t) for N = 100 from the all-up state.
    "fig10": {
        "command": "dynamics",
        **_SECOND_ORDER,
        "n_atoms": "100",
        "sweep.variable": "lambda",
        "sweep.start": "0.0",
        "sweep.stop": "2.0",
        "sweep.points": "9",
        "dynamics.t_end": "10.0",
        "dynamics.t_points": "101",
        "outputs": "entanglement,moments",
    },
    # Thermodynamic-limit C_R(lam, t) (second moments only; fast).
    "fig11": {
        "command": "dynamics",
        **_SECOND_ORDER,
        "n_atoms": "100",
        "sweep.variable": "lambda",
        "sweep.start": "0.0",
        "sweep.stop": "2.0",
        "sweep.points": "41",
        "dynamics.t_end": "10.0",
        "dynamics.t_points": "101",
        "outputs": "hp",
    },
    # C_R(h, t) for N = 100, lam = 1 (first-order transition).
    "fig18": {
        "command": "dynamics",
        **_FIRST_ORDER,
        "n_atoms": "100",
        "sweep.variable": "h",
        "sweep.start": "-0.1",
        "sweep.stop": "0.3",
        "sweep.points": "9",
        "dynamics.t_end": "10.0",
        "dynamics.t_points": "101",
        "outputs": "entanglement,moments",
    },
    # Probe transmission across the second-order transition.
    "fig4": {
        "command": "spectrum",
        "h": "1.0",
        **_CAVITY,
        "spectrum.values": "0.3,0.93,0.992,1.000625,1.005,1.05,1.5",
        "sweep.variable": "lambda",
        "spectrum.nu_min": "-3.0",
        "spectrum.nu_max": "3.0",
        "spectrum.nu_points": "2001",
    },
    # Probe transmission across the first-order transition (h sweep, lam = 1).
    "fig14": {
        "command": "spectrum",
        "lambda": "1.0",
        **_CAVITY,
        "spectrum.values": "-0.6,-0.1,-0.01,6.252e-4,0.05,0.3",
        "sweep.variable": "h",
        "spectrum.nu_min": "-3.0",
        "spectrum.nu_max": "3.0",
        "spectrum.nu_points": "2001",
    },
    # Steady-state spin Q-function, N = 50 (second-order transition).
    "fig6": {
        "command": "qfunc",
        **_SECOND_ORDER,
        "n_atoms": "50",
        "sweep.variable": "lambda",
        "qfunc.values": "0.5,1.01,1.1,2.0",
        "qfunc.n_theta": "61",
        "qfunc.n_phi": "121",
    },
    # Steady-state spin Q-function, N = 50, lam = 1 (first-order transition).
    "fig13": {
        "command": "qfunc",
        **_FIRST_ORDER,
        "n_atoms": "50",
        "sweep.variable": "h",
        "qfunc.values": "-0.5,-0.01,2.5e-3,5e-3,0.015,0.15",
        "qfunc.n_theta": "61",
        "qfunc.n_phi": "121",
    },
}
