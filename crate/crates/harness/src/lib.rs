//! File formats, experiment plans and the campaign runner behind the `upbo`
//! command-line tool.

pub mod campaign;
pub mod cli;
pub mod config;
pub mod error;
pub mod landscape;
pub mod reference;
pub mod report;
pub mod results;

pub use campaign::{run_campaign, run_campaign_with, CampaignSummary};
pub use config::{load_plan, parse_plan, ExperimentPlan, Overrides};
pub use error::{HarnessError, Result};
