"""Exact enumeration, classification, and spectral analysis of Bohemian
upper Hessenberg matrix families."""

from .charpoly import (CharPoly, charpoly, charpoly_oracle, charpoly_thm1,
                       charpoly_thm2, height)
from .classify import (ClassReport, classify_cpdb, classify_normal_shape,
                       is_neutral, is_nilpotent, is_nonderogatory, is_normal,
                       is_singular, is_stable_type1, scan_normal_matrices,
                       trace_prefilter)
from .cpdb import Cpdb, CpdbRecord
from .enumeration import (BudgetError, Shard, enumerate_family,
                          enumerate_general, enumerate_to_cpdb, family_cpdb,
                          make_shards)
from .family import (DenseMatrix, FamilySpec, HessMatrix, Population, Shape,
                     family_size, matrix_entry, normalize_subdiagonal,
                     population_invariant_under)
from .gaussint import GaussInt, parse_gauss, render_gauss
from .heights import (HeightSeries, max_height_witness, tau_series,
                      verify_max_height)
from .render import DensityGrid, accumulate, centered_grid, write_image
from .spectra import (MultiplicityTable, RootSet, distinct_real_eigs,
                      max_real_part, multiplicity_table, roots,
                      squarefree_decompose)

__version__ = "0.1.0"
