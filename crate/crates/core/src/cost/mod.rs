//! Analytic counters: data sizes, key-switch work, off-chip traffic and
//! arithmetic intensity of (I)DFT passes, utilization bounds and amortized
//! per-slot multiplication time.

mod keyswitch;
mod pass;
mod profile;
mod report;
mod summary;

pub use keyswitch::{
    keyswitch_mults, ntt_mults_per_limb, of_limb_mults, pmult_mults, rescale_mults, KeySwitchMults,
    TWIST_MULTS_PER_COEFF,
};
pub use pass::{
    hdft_pass_cost, tas_metric, utilization_bound, CostReport, IterationCost, IterationDesc, OffchipBytes,
    PassDescription, VariantComparison,
};
pub use profile::{
    data_sizes, distribution_transfer, reference_rows, twist_storage_words, DataSizes, MachineProfile, ParamProfile,
    TransferPolicy, MIB,
};
pub use report::{fmt, Check, Record, Report, Table, REPORT_SCHEMA};
pub use summary::{
    ark_targets, breakdown_report, default_pass, intensity_report, profile_sizes, sizes_report, IntensityTargets,
};
