//! Pooled OLS, the lagged regression panel, and two-sample mean tests.

pub mod dist;
mod ols;
mod panel;
mod regressions;
mod ttest;

pub use ols::{ols_fit, Design, RegressionFit, SeType};
pub use panel::{
    build_panel, write_panel, DropReason, PanelBuild, PanelOptions, PanelRow, COUNT_SCALE, PANEL_HEADER, RANGE_SCALE,
};
pub use regressions::{
    majority_group_tests, panel_design, regressor_values, run_industry_regressions, run_paper_regressions,
    sector_group, GroupTest, Outcome, SectorOutcome, SectorResult, DEFAULT_MIN_ROWS, GROUP_TEST_VARIABLES,
    OTHER_SECTOR, REGRESSORS, SECTORS,
};
pub use ttest::{mean_difference_test, MeanTestResult, TTestMode};
