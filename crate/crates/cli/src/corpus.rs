//! Instances bundled with the binary.

/// `(file stem, source)` for every bundled instance, sorted by stem.
pub const CORPUS: &[(&str, &str)] = &[
    ("dup_line", include_str!("../corpus/dup_line.amg")),
    ("dup_line_square", include_str!("../corpus/dup_line_square.amg")),
    ("dup_plane_fp", include_str!("../corpus/dup_plane_fp.amg")),
    ("dup_plane_max", include_str!("../corpus/dup_plane_max.amg")),
    ("dup_plane_x", include_str!("../corpus/dup_plane_x.amg")),
    ("free_flat", include_str!("../corpus/free_flat.amg")),
    ("nil_cube", include_str!("../corpus/nil_cube.amg")),
    ("non_cm_inclusion", include_str!("../corpus/non_cm_inclusion.amg")),
    ("triv_cyclic", include_str!("../corpus/triv_cyclic.amg")),
    ("triv_free", include_str!("../corpus/triv_free.amg")),
    ("triv_max", include_str!("../corpus/triv_max.amg")),
    ("triv_point", include_str!("../corpus/triv_point.amg")),
];
