"""kcell: exact cellular approximation of chain complexes over group algebras.

Layers, bottom up: linalg (exact matrices), groups (finite groups and
their modules), complexes (bounded equivariant chain complexes), derived
(resolutions, Ext, Tor, Borel constructions), cellular (approximation
strategies with build certificates), localcoh (augmentation-ideal local
cohomology), emss (Eilenberg-Moore and Postnikov spectral sequence
bookkeeping), cli (scenario runner).
"""

__version__ = "0.1.0"
