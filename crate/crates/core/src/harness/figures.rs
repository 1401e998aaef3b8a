//! The four figure datasets: scenarios, ordering checks and gnuplot scripts.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use super::presets::Preset;
use super::report::{emit_report, format_sig, Format};
use super::scenario::{run_verify, Grid, Scenario, StateSource, Sweep};
use crate::bounds::{BoundFamily, BoundReport, BoundSpec, Relation, SATISFACTION_TOL};
use crate::entanglement::{MeasureParams, Variant};
use crate::states::Partition;
use crate::{Error, Result};

/// Default horizontal axis of each figure.
pub fn default_axis(figure: u8) -> Result<Grid> {
    match figure {
        1 => Grid::new(0.0, 3.0, 0.05),
        2 | 4 => Grid::new(0.01, 1.0, 0.01),
        3 => Grid::new(2.0, 6.0, 0.05),
        _ => Err(Error::Argument(format!("no figure {figure}; expected 1-4"))),
    }
}

fn axis_label(figure: u8) -> &'static str {
    match figure {
        1 => "gamma",
        3 => "beta",
        _ => "mu",
    }
}

/// The scenario behind one figure; `axis` overrides the default sweep range.
pub fn figure_scenario(figure: u8, axis: Option<Grid>) -> Result<Scenario> {
    let axis = match axis {
        Some(g) => g,
        None => default_axis(figure)?,
    };
    let singletons = Partition::singletons(3)?;
    let (preset, measure, specs, ks) = match figure {
        1 => (
            Preset::Example1,
            MeasureParams::tsallis(2.0, Variant::Standard),
            vec![
                BoundSpec::new(BoundFamily::Lemma2Gamma, 64.0, 1.0).with_mu_ref(3.0),
                BoundSpec::new(BoundFamily::BaselineT4, 1.0, 1.0)
                    .with_mu_ref(3.0)
                    .with_t(0),
            ],
            vec![64.0, 10.0],
        ),
        2 => (
            Preset::Example2,
            MeasureParams::tsallis(2.0, Variant::Assistance),
            vec![
                BoundSpec::new(BoundFamily::Hamming, 0.64, 0.5),
                BoundSpec::new(BoundFamily::BaselineT5, 1.0, 0.5),
            ],
            vec![0.64, 1.0],
        ),
        3 => (
            Preset::Example3,
            MeasureParams::renyi(2.0, Variant::Standard),
            vec![
                BoundSpec::new(BoundFamily::Hamming, 0.52, 2.0),
                BoundSpec::new(BoundFamily::BaselineE3, 1.0, 2.0),
            ],
            vec![0.52],
        ),
        4 => (
            Preset::Example4,
            MeasureParams::renyi(1.2, Variant::Assistance),
            vec![
                BoundSpec::new(BoundFamily::Hamming, 1.0, 0.5),
                BoundSpec::new(BoundFamily::BaselineE5, 1.0, 0.5),
            ],
            vec![1.0, 0.8, 0.7],
        ),
        _ => return Err(Error::Argument(format!("no figure {figure}; expected 1-4"))),
    };
    let mut s = Scenario::new(StateSource::Preset(preset), singletons, measure, specs);
    s.sweep = Sweep {
        exponent: Some(axis),
        k: Some(ks),
    };
    Ok(s)
}

/// Checks the pointwise curve orderings of a figure dataset at every sweep
/// point where the new bound's preconditions hold. Returns one message per
/// violation.
pub fn check_orderings(reports: &[BoundReport]) -> Vec<String> {
    let tol = SATISFACTION_TOL;
    let mut problems = Vec::new();
    let baselines: Vec<&BoundReport> = reports
        .iter()
        .filter(|r| {
            !matches!(
                r.family,
                BoundFamily::Hamming | BoundFamily::JPower | BoundFamily::TSplit | BoundFamily::Lemma2Gamma
            )
        })
        .collect();
    for r in reports
        .iter()
        .filter(|r| !baselines.iter().any(|b| std::ptr::eq(*b, *r)))
    {
        if !r.preconditions_ok {
            continue;
        }
        let Some(base) = baselines.iter().find(|b| (b.exponent - r.exponent).abs() < 1e-12) else {
            problems.push(format!("{} at exponent {}: no baseline point", r.family, r.exponent));
            continue;
        };
        let at = format!(
            "{} k={} at exponent {}",
            r.family,
            format_sig(r.k),
            format_sig(r.exponent)
        );
        match r.relation {
            Relation::Monogamy => {
                if r.bound < base.bound - tol {
                    problems.push(format!("{at}: bound {} < baseline {}", r.bound, base.bound));
                }
                if base.bound < -tol {
                    problems.push(format!("{at}: baseline {} < 0", base.bound));
                }
                if r.lhs < r.bound - tol {
                    problems.push(format!("{at}: exact {} < bound {}", r.lhs, r.bound));
                }
            }
            Relation::Polygamy => {
                if r.lhs > r.bound + tol {
                    problems.push(format!("{at}: exact {} > bound {}", r.lhs, r.bound));
                }
                if r.bound > base.bound + tol {
                    problems.push(format!("{at}: bound {} > baseline {}", r.bound, base.bound));
                }
            }
        }
    }
    problems
}

/// A generated figure: rows, CSV text and a gnuplot script reading the CSV.
#[derive(Debug, Clone)]
pub struct FigureData {
    pub figure: u8,
    pub reports: Vec<BoundReport>,
    pub csv: String,
    pub gnuplot: String,
}

impl FigureData {
    pub fn csv_name(&self) -> String {
        format!("fig{}.csv", self.figure)
    }

    pub fn script_name(&self) -> String {
        format!("fig{}.gp", self.figure)
    }

    /// Writes `figN.csv` and `figN.gp` into `dir`.
    pub fn write(&self, dir: &Path) -> Result<(PathBuf, PathBuf)> {
        std::fs::create_dir_all(dir).map_err(|e| Error::from(e).context(format!("creating {}", dir.display())))?;
        let csv = dir.join(self.csv_name());
        let gp = dir.join(self.script_name());
        for (path, text) in [(&csv, &self.csv), (&gp, &self.gnuplot)] {
            std::fs::write(path, text).map_err(|e| Error::from(e).context(format!("writing {}", path.display())))?;
        }
        Ok((csv, gp))
    }
}

fn gnuplot_script(figure: u8, csv_name: &str, reports: &[BoundReport]) -> String {
    let mut curves: Vec<(String, String)> = Vec::new();
    for r in reports {
        let key = (r.family.tag().to_string(), format_sig(r.k));
        if !curves.contains(&key) {
            curves.push(key);
        }
    }
    let mut s = String::new();
    let _ = writeln!(s, "set datafile separator ','");
    let _ = writeln!(s, "set key left top");
    let _ = writeln!(s, "set xlabel '{}'", axis_label(figure));
    let _ = writeln!(s, "set ylabel 'bound'");
    let _ = writeln!(s, "set terminal pngcairo size 800,600");
    let _ = writeln!(s, "set output 'fig{figure}.png'");
    let filter =
        |tag: &str, k: &str| format!("\"< awk -F, 'NR>1 && $1==\\\"{tag}\\\" && $4==\\\"{k}\\\"' {csv_name}\"");
    let mut plots = Vec::new();
    let (tag0, k0) = &curves[0];
    plots.push(format!(
        "{} using 3:6 with lines lw 2 lc rgb 'black' title 'exact'",
        filter(tag0, k0)
    ));
    for (tag, k) in &curves {
        let title = if tag.starts_with("baseline") {
            tag.clone()
        } else {
            format!("{tag} k={k}")
        };
        plots.push(format!("{} using 3:7 with lines title '{title}'", filter(tag, k)));
    }
    let _ = writeln!(s, "plot {}", plots.join(", \\\n     "));
    s
}

pub fn generate_figure(figure: u8, axis: Option<Grid>) -> Result<FigureData> {
    let scenario = figure_scenario(figure, axis)?;
    let reports = run_verify(&scenario).map_err(|e| e.context(format!("figure {figure}")))?;
    let csv = emit_report(&reports, Format::Csv)?;
    let gnuplot = gnuplot_script(figure, &format!("fig{figure}.csv"), &reports);
    Ok(FigureData {
        figure,
        reports,
        csv,
        gnuplot,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn figure_one_curves() {
        let fig = generate_figure(1, None).unwrap();
        // lemma2 for k = 10 and 64, plus the baseline, over 61 points
        assert_eq!(fig.reports.len(), 3 * 61);
        assert!(check_orderings(&fig.reports).is_empty());
        let r = fig
            .reports
            .iter()
            .find(|r| r.k == 64.0 && (r.exponent - 2.0).abs() < 1e-12)
            .unwrap();
        let expect =
            (1.0f64 / 18.0).powi(2) + (65f64.powf(2.0 / 3.0) - 1.0) / 64f64.powf(2.0 / 3.0) * (2.0f64 / 9.0).powi(2);
        assert!((r.bound - expect).abs() < 1e-12);
        assert!(fig.gnuplot.contains("fig1.csv") && fig.gnuplot.contains("lemma2-gamma"));
    }

    #[test]
    fn axis_override() {
        let fig = generate_figure(3, Some(Grid::new(2.0, 3.0, 0.5).unwrap())).unwrap();
        assert_eq!(fig.reports.len(), 2 * 3);
        assert!(generate_figure(5, None).is_err());
    }

    #[test]
    fn ordering_check_catches_violations() {
        let mut fig = generate_figure(2, None).unwrap();
        let i = fig
            .reports
            .iter()
            .position(|r| r.family == BoundFamily::Hamming && r.preconditions_ok)
            .unwrap();
        fig.reports[i].bound = 10.0;
        assert!(!check_orderings(&fig.reports).is_empty());
    }
}
