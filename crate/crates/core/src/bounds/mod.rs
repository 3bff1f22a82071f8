//! Bound curves versus noise, cut bounds over party partitions, and the
//! one-time-pad key relay along a path.

mod curves;
mod cuts;
mod relay;

pub use curves::{
    all_curves, default_grid, dual_bound_curve, dual_bound_curve_with, dw_lower_proxy_curve, intrinsic_bound_curve,
    intrinsic_bound_curve_with, nu_grid, trivial_bound_curve, write_curves_csv, BoundCurve, CurveSettings,
};
pub use cuts::{
    enumerate_partitions, partition_bound, path_cut_value, path_partition_bound, Partition, PartitionBoundInput,
};
pub use relay::{relay_enumerate, relay_run, relay_simulate, RelayEnumeration, RelayTranscript};
