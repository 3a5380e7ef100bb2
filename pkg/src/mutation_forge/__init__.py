"""mutation_forge: exact-arithmetic mutations of spaces of morphisms.

Modules:
    exactfield  — exact matrices, subspaces, finite-field enumeration
    theta       — abstract morphism spaces, their total space and group actions
    mutation    — dual spaces, the mutation map, orbit-transport witnesses
    homdata     — type-(r,s) Hom systems, instance builders, polarizations
    stability   — brute-force semistability oracles over GF(p)
    constants   — genericity, length, delta, and the c-constant machinery
    thresholds  — closed-form existence conditions and singular values
    cli         — batch front end
"""

__version__ = "0.1.0"
