"""Slender-body boundary-value problems and filament evolution for Stokes flow.

Modules
-------
specfun      modified Bessel functions I and K of orders 0..2
multipliers  Fourier symbols of layer potentials and DtN/NtD maps on a straight tube
geometry     Fourier curves, periodic frames, tube surface grids
fields       centerline and surface vector fields, frame identification
layers       Stokes kernels and corrected on-surface quadrature
bvp          straight and curved DtN/NtD solves
evolution    spectral time stepping of the filament
cli          command-line front end
"""

__version__ = "0.1.0"
