"""Dispatch layer binding the active kernel backend (see ``backend``)."""

from . import backend

if backend.USE_NUMBA:
    from . import _kernels_numba as _impl
else:
    from . import _kernels_numpy as _impl

mobius_segment = _impl.mobius_segment
squarefree_segment = _impl.squarefree_segment
residue_counts = _impl.residue_counts
phase_sum_inverse_power = _impl.phase_sum_inverse_power
twisted_mobius_kernel = _impl.twisted_mobius_kernel
mixed_sum_kernel = _impl.mixed_sum_kernel
psi_progression_kernel = _impl.psi_progression_kernel
square_pair_count_kernel = _impl.square_pair_count_kernel
