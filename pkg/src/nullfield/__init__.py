"""Null electromagnetic fields built from complex spacetime potentials, and
the associated Legendrian vector fields on the 3-sphere.

Subpackages of interest:

- `geom`       sphere frames, contact form, stereographic correspondence
- `funcspace`  exact mixed polynomials in z1, z2 and their conjugates
- `bateman`    the spacetime potentials, field assembly and residual checks
- `legendrian` fields on S^3, divergence/CR identities, rotation numbers
- `flow`       field-line tracing, closure, windings, linking numbers
- `floquet`    variational equations, monodromy, Diophantine checks
- `evolve`     energy-flow transport and topology-preservation checks
- `cli`        deterministic command-line front end
"""

__version__ = "0.1.0"
