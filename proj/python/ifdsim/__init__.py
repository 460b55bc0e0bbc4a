"""Python bindings for the interaction-free detection simulator."""

from ._core import (
    __version__,
    b_pulse,
    beam_splitter,
    coherent_checkpoints,
    coherent_sequence_unitary,
    dark_count_rate,
    efficiency,
    expansion_coefficients,
    majorana_stars,
    pr_nr,
    projective_closed_form,
    qubit_probe,
    quantized_marginals,
    run_coherent,
    run_dissipative,
    run_projective,
    run_scenario,
    sample_shots,
    thermal_state,
)

__all__ = [
    "__version__",
    "b_pulse",
    "beam_splitter",
    "coherent_checkpoints",
    "coherent_sequence_unitary",
    "dark_count_rate",
    "efficiency",
    "expansion_coefficients",
    "majorana_stars",
    "pr_nr",
    "projective_closed_form",
    "qubit_probe",
    "quantized_marginals",
    "run_coherent",
    "run_dissipative",
    "run_projective",
    "run_scenario",
    "sample_shots",
    "thermal_state",
]
