"""Simulator and training laboratory for lossy photonic networks with Kerr layers."""

from ._qpnn import (
    FockBasis,
    element_loss,
    fit_beta,
    fit_lognormal,
    fredkin_bsa_fidelity,
    ideal_mzi,
    linear_optical_bound,
    loss_limit,
    max_plateau_indices,
    multi_photon_transform,
    permanent,
    realistic_mzi,
    series_success_rate,
    success_threshold,
    train,
)

__all__ = [
    "FockBasis",
    "element_loss",
    "fit_beta",
    "fit_lognormal",
    "fredkin_bsa_fidelity",
    "ideal_mzi",
    "linear_optical_bound",
    "loss_limit",
    "max_plateau_indices",
    "multi_photon_transform",
    "permanent",
    "realistic_mzi",
    "series_success_rate",
    "success_threshold",
    "train",
]
