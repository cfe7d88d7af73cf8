//! Scenario configuration, seeded experiment execution and result emission.

mod config;
mod output;
mod presets;
mod runner;
mod seed;

pub use config::{
    default_geometry, load_config, parse_config, relational_link_gains, Algorithm,
    HypergraphSource, LearningSettings, RadioSettings, RelationalGains, ScenarioConfig,
    ScenarioKind,
};
pub use output::{
    run_scenario, write_metadata, write_slots, write_summary, METADATA_FILE, SLOTS_FILE,
    SLOTS_HEADER, SUMMARY_FILE, SUMMARY_HEADER,
};
pub use presets::{
    describe, fig3_id, fig5_activity_id, fig5_channels_id, fig5_edge_list, fig5_hwi_id, preset,
    Overrides, FIG3_JAM_POWERS, FIG5_ACTIVITY, FIG5_CHANNELS, FIG5_STRONG, FIG5_WEAK, PRESET_NAMES,
};
pub use runner::{
    metric_names, simulate, AlgorithmSeries, Prepared, RunOutput, RunSummary, SummaryRow,
    BEST_RESPONSE_PASSES, JAM_HIT, MEAN_RATE, NORMALIZED_CAPACITY, SUM_RATE,
};
pub use seed::{splitmix64, stream_rng, trial_seed, Stream};
