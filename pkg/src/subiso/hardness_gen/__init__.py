"""Hard-instance generators and the reductions behind them."""
from .avg_free import (AvgFreeSet, avg_free_set, fitted_constant, is_average_free,
                       is_average_free_exhaustive, requested_bound)
from .colsubiso import (WeightedReduction, colorize, hyperclique_to_colsubiso,
                        hyperclique_to_ew_colsubiso)
from .kwise import (brute_decide, find_hyperclique, hyperclique_to_kwise_mp,
                    kwise_mp_to_hyperclique)
from .subset_sum import (SubsetSumInstance, g, hyperclique_to_ksum, hyperclique_to_subsetsum,
                         ksum_to_subsetsum, subset_sum_dp)
from .twl import twin_water_lily, twl_pairs, twl_parts, twl_width_bounds

__all__ = [
    "AvgFreeSet", "avg_free_set", "fitted_constant", "is_average_free",
    "is_average_free_exhaustive", "requested_bound",
    "WeightedReduction", "colorize", "hyperclique_to_colsubiso", "hyperclique_to_ew_colsubiso",
    "brute_decide", "find_hyperclique", "hyperclique_to_kwise_mp", "kwise_mp_to_hyperclique",
    "SubsetSumInstance", "g", "hyperclique_to_ksum", "hyperclique_to_subsetsum",
    "ksum_to_subsetsum", "subset_sum_dp",
    "twin_water_lily", "twl_pairs", "twl_parts", "twl_width_bounds",
]
