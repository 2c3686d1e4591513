use oac_core::algebra::AlgebraicRate;
use oac_core::ccs::{self, SpectrumGrid};
use oac_core::hds::{self, HdsTable};
use oac_core::shift::{self, CensusScope, IndexSet, WProfile};
use oac_core::{Budget, CodeParams};
use serde_json::json;

use crate::args::Target;
use crate::commands::{census_rows, hds_rows, psi3_table, psi_closed_table, theory_rows, Output};
use crate::output::Table;
use crate::Failure;

const N: u32 = 20;
const R: f64 = 0.5;
const BINS: usize = 64;
const CCS_BINS: usize = 4096;

fn spectrum() -> Result<SpectrumGrid, Failure> {
    Ok(ccs::solve_asymptotic_ccs(R, CCS_BINS, ccs::DEFAULT_TOL)?)
}

fn shift_table(stem: &str, d: u32) -> Table {
    Table::new(stem, &["w", "fW", "scope"], json!({ "n": N, "r": R, "d": d, "bins": BINS }))
}

/// Inputs shared by the census comparisons.
struct Census<'a> {
    p: &'a CodeParams,
    f: &'a SpectrumGrid,
    budget: &'a Budget,
}

fn census_vs_theory(
    t: &mut Table,
    out: &mut Output,
    c: &Census<'_>,
    d: u32,
    scope: CensusScope,
    profile: WProfile,
    label: &str,
) -> Result<(), Failure> {
    let h = shift::shift_census_with(d, c.p, &scope, c.budget)?;
    let th = shift::theoretical_w_pdf(profile, c.f, c.p)?;
    let l1: f64 = h.rebin(BINS).iter().map(|(w, v)| (v - th.eval(*w)).abs()).sum::<f64>() * (2.0 / BINS as f64);
    out.say(format!("d = {d}, {label}: L1 = {l1:.4e}"));
    census_rows(t, &h, BINS, label);
    theory_rows(t, &th, BINS, &format!("theory-{profile}"));
    Ok(())
}

fn hds_methods(p: &CodeParams, f: &SpectrumGrid, range: std::ops::RangeInclusive<u32>, budget: &Budget) -> Result<Vec<HdsTable>, Failure> {
    let n = p.n();
    let (soft, hard) = hds::hds_soft_hard(p, range, budget)?;
    Ok(vec![
        hds::hds_exhaustive_with(p, budget)?,
        hds::hds_binomial(p, f),
        soft,
        hard,
        hds::hds_fast(p, f, (n - hds::fast_window(n))..=n, None)?,
    ])
}

pub fn run(target: Target, budget: &Budget) -> Result<Output, Failure> {
    let mut out = Output::default();
    let stem = target.name().replace('-', "_");
    match target {
        Target::ShiftDistN => {
            let p = CodeParams::new(N, R)?;
            let f = spectrum()?;
            let mut t = shift_table(&stem, N);
            census_vs_theory(&mut t, &mut out, &Census { p: &p, f: &f, budget }, N, CensusScope::All, WProfile::Full, "all")?;
            out.tables.push(t);
        }
        Target::ShiftDistN1 => {
            let p = CodeParams::new(N, R)?;
            let f = spectrum()?;
            let d = N - 1;
            let mut t = shift_table(&stem, d);
            for k in 1..=5 {
                let scope = CensusScope::One(IndexSet::gap_at(N, k)?);
                census_vs_theory(&mut t, &mut out, &Census { p: &p, f: &f, budget }, d, scope, WProfile::GapAt(k), &format!("gap:{k}"))?;
            }
            let h = shift::shift_census_with(d, &p, &CensusScope::All, budget)?;
            census_rows(&mut t, &h, BINS, "all");
            out.tables.push(t);
        }
        Target::ShiftDistD => {
            let p = CodeParams::new(N, R)?;
            let f = spectrum()?;
            let mut t = Table::new(&*stem, &["d", "w", "fW", "scope"], json!({ "n": N, "r": R, "bins": BINS }));
            for d in 15..=N {
                let mut part = shift_table("", d);
                let profile = if d == N { WProfile::Full } else { WProfile::Generic { d } };
                census_vs_theory(&mut part, &mut out, &Census { p: &p, f: &f, budget }, d, CensusScope::All, profile, "all")?;
                for mut row in part.rows {
                    row.insert(0, d.into());
                    t.push(row);
                }
            }
            out.tables.push(t);
        }
        Target::HdsAll | Target::HdsZoom => {
            let p = CodeParams::new(N, R)?;
            let f = spectrum()?;
            let range = if target == Target::HdsAll { 0..=N } else { 15..=N };
            let mut t = Table::new(&*stem, &["d", "psi", "method"], json!({ "n": N, "r": R, "dmin": range.start(), "dmax": range.end() }));
            for table in hds_methods(&p, &f, range.clone(), budget)? {
                hds_rows(&mut t, &table, range.clone());
            }
            out.say(format!("{} rows for d in {}..={}", t.rows.len(), range.start(), range.end()));
            out.tables.push(t);
        }
        Target::Psi12Curves => {
            let rates: Vec<f64> = (0..=100).map(|i| 0.5 + 0.005 * f64::from(i)).collect();
            let mut t = psi_closed_table(&rates, json!({ "rmin": 0.5, "rmax": 1.0, "steps": 101 }))?;
            t.stem = stem;
            out.say(format!("{} rates in [0.5, 1]", rates.len()));
            out.tables.push(t);
        }
        Target::Psi3Divergent => {
            for (name, poly) in [("golden", "x^2-x-1"), ("plastic", "x^3-x-1")] {
                let rate: AlgebraicRate = poly.parse()?;
                let v = oac_core::convergence::psi3_analytic(&rate, N)?;
                out.say(format!("{name}: psi(3;n) = {} for n ≥ {}", v.closed_form(), v.horizon));
                let t = psi3_table(&format!("{stem}_{name}"), &rate, 3..=N, true, budget, json!({ "alpha": poly, "nmin": 3, "n": N }))?;
                out.tables.push(t);
            }
        }
    }
    Ok(out)
}
