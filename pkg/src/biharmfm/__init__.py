"""Factorization-method imaging for flexural waves in thin plates.

Submodules: specfun (cylinder functions), geometry (scatterer shapes),
forward (exact disk and Born far fields), operators (far-field matrices),
imaging (eigensystem and indicator fields), config, pipeline and cli.
"""

__version__ = "0.1.0"
