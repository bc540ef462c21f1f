from geometry.body import (
    ConvexBody,
    canonicalize,
    circumradius,
    minkowski_combination,
    minkowski_sum,
    origin,
    point_body,
    regular_polygon,
    scale,
    steiner_point,
    support_function,
    support_point,
    support_points,
)
from geometry.distance import (
    bodies_close,
    body_tolerance,
    directed_distance,
    distance_to_body,
    hausdorff_distance,
    point_distances,
)
from geometry.embedding import (
    DirectionGrid,
    Halfspace,
    SupportVector,
    direction_grid,
    embed,
    grid_indices,
    halfspaces,
    reconstruct,
    reconstruction_deficit,
    sup_norm_distance,
    support_consistency_check,
)

__all__ = [
    "ConvexBody",
    "DirectionGrid",
    "Halfspace",
    "SupportVector",
    "bodies_close",
    "body_tolerance",
    "canonicalize",
    "circumradius",
    "directed_distance",
    "direction_grid",
    "distance_to_body",
    "embed",
    "grid_indices",
    "halfspaces",
    "hausdorff_distance",
    "minkowski_combination",
    "minkowski_sum",
    "origin",
    "point_body",
    "point_distances",
    "reconstruct",
    "reconstruction_deficit",
    "regular_polygon",
    "scale",
    "steiner_point",
    "sup_norm_distance",
    "support_consistency_check",
    "support_function",
    "support_point",
    "support_points",
]
