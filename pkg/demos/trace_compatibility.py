"""Compatibility check: tracing the fine form back down the levels.

A refined sequence is compatible when the Schur-complement trace of the
level-n energy form onto the coarser vertex set reproduces the level-(n-1)
form.  The residuals below sit at rounding error for every level, variant,
and data class.
"""

import numpy as np

from gasketforms import lattice
from gasketforms.conductance import STANDARD, TWISTED, conductance_sequence
from gasketforms.graphform import assemble_energy, build_graph, trace_to_subset

for variant in (STANDARD, TWISTED):
    maps = lattice.standard_ifs() if variant == STANDARD else lattice.twisted_ifs()
    for a0 in (1.0, 2.0):
        rep = conductance_sequence(a0, 1, 1, 5, variant)
        label = "symmetric" if a0 == 1.0 else "asymmetric"
        resids = []
        for n in range(1, 6):
            fine_g = build_graph(maps, n)
            coarse_g = build_graph(maps, n - 1)
            fine = assemble_energy(fine_g, rep.conductances[n])
            coarse = assemble_energy(coarse_g, rep.conductances[n - 1])
            keep = [fine_g.vertex_index.id_of(p) for p in coarse_g.vertex_index.points]
            A = trace_to_subset(fine, keep).L.toarray()
            B = coarse.L.toarray()
            resids.append(np.max(np.abs(A - B)) / np.max(np.abs(B)))
        worst = max(resids)
        print(f"{variant:>8} {label:>10}: max relative trace residual over n<=5: {worst:.3e}")
