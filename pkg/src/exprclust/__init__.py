"""Clustering toolkit for gene-expression matrices.

K-Means, ISODATA, AGMFI (automatic merge factor) and EIAGMFI (AGMFI seeded
by the deterministic CCIA initializer), with silhouette quality scoring.
"""

from .adaptive import (
    AgmfiParams,
    IsodataParams,
    agmfi,
    auto_merge_factor,
    eiagmfi,
    isodata,
    merge_clusters,
    split_cluster,
)
from .errors import AlgorithmError, ConstantRowError, DataError, EmptyClusterError, ExprClustError
from .kernels import BACKEND
from .kmeans import (
    ClusteringResult,
    euclidean_distance,
    kmeans,
    nearest_centroid,
    recompute_centroids,
)
from .matrix_io import (
    ExpressionMatrix,
    RawMatrix,
    drop_missing_rows,
    generate_synthetic,
    load_delimited,
    write_delimited,
    zscore_normalize,
)
from .quality import QualityReport, quality_score, silhouette
from .seeding import SeedGroups, ccia_groups, ccia_seed

__version__ = "0.1.0"
