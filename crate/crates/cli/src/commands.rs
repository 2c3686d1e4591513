use oac_core::algebra::AlgebraicRate;
use oac_core::bitseq::{encode, partition_cosets_with, word_string, BitBlock};
use oac_core::ccs::{self, SpectrumGrid};
use oac_core::convergence::{self, SpeciesClass};
use oac_core::hds::{self, HdsTable, MixedPlan};
use oac_core::shift::{self, CensusScope, IndexSet, WProfile};
use oac_core::{Budget, CodeParams};
use serde_json::{json, Value};

use crate::args::{CcsMode, Command, HdsMethod, RateArg};
use crate::output::{Cell, Table};
use crate::Failure;

/// Tables to write and lines to print.
#[derive(Debug, Default)]
pub struct Output {
    pub tables: Vec<Table>,
    pub summary: Vec<String>,
}

impl Output {
    pub fn say(&mut self, line: impl Into<String>) {
        self.summary.push(line.into());
    }
}

pub fn parse_alpha(s: &str) -> Result<AlgebraicRate, Failure> {
    s.parse::<AlgebraicRate>()
        .map_err(|e| Failure::usage(format!("--alpha {s:?}: {e}")))
}

pub fn code_params(n: u32, rate: &RateArg) -> Result<CodeParams, Failure> {
    match (&rate.r, &rate.alpha) {
        (Some(r), None) => Ok(CodeParams::new(n, *r)?),
        (None, Some(a)) => Ok(CodeParams::with_rate(n, parse_alpha(a)?)?),
        _ => Err(Failure::usage("exactly one of --r and --alpha is required")),
    }
}

pub fn rate_value(rate: &RateArg) -> Result<f64, Failure> {
    match (&rate.r, &rate.alpha) {
        (Some(r), None) => Ok(*r),
        (None, Some(a)) => Ok(parse_alpha(a)?.r()),
        _ => Err(Failure::usage("exactly one of --r and --alpha is required")),
    }
}

pub fn rate_json(rate: &RateArg) -> Value {
    json!({ "r": rate.r, "alpha": rate.alpha })
}

fn merge(mut a: Value, b: Value) -> Value {
    if let (Value::Object(x), Value::Object(y)) = (&mut a, b) {
        x.extend(y);
    }
    a
}

pub fn hds_rows(table: &mut Table, t: &HdsTable, range: std::ops::RangeInclusive<u32>) {
    for (d, psi, m) in t.rows().filter(|r| range.contains(&r.0)) {
        table.push(vec![d.into(), psi.into(), m.name().into()]);
    }
}

pub fn census_rows(table: &mut Table, h: &shift::ShiftHistogram, bins: usize, label: &str) {
    for (w, v) in h.rebin(bins) {
        table.push(vec![w.into(), v.into(), label.into()]);
    }
}

pub fn theory_rows(table: &mut Table, th: &shift::WDensity, bins: usize, label: &str) {
    for (w, v) in th.sample(bins) {
        table.push(vec![w.into(), v.into(), label.into()]);
    }
}

fn parse_scope(scope: &str, n: u32, d: u32) -> Result<(CensusScope, Option<u32>), Failure> {
    if scope == "all" {
        return Ok((CensusScope::All, None));
    }
    let k = scope
        .strip_prefix("gap:")
        .and_then(|k| k.parse::<u32>().ok())
        .ok_or_else(|| Failure::usage(format!("--scope {scope:?}: expected `all` or `gap:K`")))?;
    if d + 1 != n {
        return Err(Failure::usage("gap scopes describe d = n − 1"));
    }
    Ok((CensusScope::One(IndexSet::gap_at(n, k)?), Some(k)))
}

pub fn run(cmd: &Command, budget: &Budget) -> Result<Output, Failure> {
    let mut out = Output::default();
    match cmd {
        Command::Encode { n, rate, word } => {
            let p = code_params(*n, rate)?;
            let x: BitBlock = word.parse().map_err(|e| Failure::usage(format!("--word: {e}")))?;
            let e = encode(&x, &p)?;
            let params = merge(json!({ "n": n, "word": word }), rate_json(rate));
            let mut t = Table::new("encode", &["word", "ell", "l", "m"], params);
            t.push(vec![word.as_str().into(), e.ell.into(), e.l.into(), e.m.into()]);
            out.tables.push(t);
            out.say(format!("word {word}: ell = {:.12}, m = {}", e.ell, e.m));
        }
        Command::Partition { n, rate } => {
            let p = code_params(*n, rate)?;
            let cp = partition_cosets_with(&p, budget)?;
            let mut t = Table::new("partition", &["m", "word"], merge(json!({ "n": n }), rate_json(rate)));
            for (m, words) in cp.iter() {
                for &w in words {
                    t.push(vec![m.into(), word_string(u64::from(w), *n).into()]);
                }
            }
            let sizes = cp.sizes();
            out.say(format!(
                "{} cosets, sizes {}..{}, Σ|C|² = {}",
                sizes.len(),
                sizes.iter().min().unwrap(),
                sizes.iter().max().unwrap(),
                cp.sum_of_squares()
            ));
            if *n <= 6 {
                for (m, words) in cp.iter() {
                    let list: Vec<String> = words.iter().map(|&w| word_string(u64::from(w), *n)).collect();
                    out.say(format!("C_{m} = {{{}}}", list.join(", ")));
                }
            }
            out.tables.push(t);
        }
        Command::Ccs { rate, mode, n, bins, tol } => {
            let params = merge(json!({ "mode": mode, "n": n, "bins": bins, "tol": tol }), rate_json(rate));
            let f = match mode {
                CcsMode::Asymptotic => ccs::solve_asymptotic_ccs(rate_value(rate)?, *bins, *tol)?,
                CcsMode::Backward | CcsMode::Empirical => {
                    let n = n.ok_or_else(|| Failure::usage("--n is required for this mode"))?;
                    let p = code_params(n, rate)?;
                    if *mode == CcsMode::Backward {
                        ccs::backward_ccs(&p, *bins)?.swap_remove(0)
                    } else {
                        grid_from_counts(&ccs::empirical_ccs_counts(&p, *bins, budget)?)?
                    }
                }
            };
            let mut t = Table::new("ccs", &["u", "f"], params);
            for (u, v) in f.samples() {
                t.push(vec![u.into(), v.into()]);
            }
            out.say(format!(
                "∫f² = {:.9}, f(1/2) = {:.9}, mass = {:.12}",
                ccs::ccs_square_integral(&f),
                f.eval(0.5),
                f.mass()
            ));
            out.tables.push(t);
        }
        Command::Hds { n, rate, method, dmin, dmax, bins } => {
            let p = code_params(*n, rate)?;
            let dmax = dmax.unwrap_or(*n);
            if dmin > &dmax || dmax > *n {
                return Err(Failure::usage(format!("distance range {dmin}..={dmax} is not inside 0..={n}")));
            }
            let range = *dmin..=dmax;
            let params = merge(
                json!({ "n": n, "method": method, "dmin": dmin, "dmax": dmax, "bins": bins }),
                rate_json(rate),
            );
            let spectrum = || ccs::solve_asymptotic_ccs(p.r(), *bins, ccs::DEFAULT_TOL);
            let t = match method {
                HdsMethod::Exhaustive => {
                    let cp = partition_cosets_with(&p, budget)?;
                    let t = hds::hds_exhaustive_from(&cp, budget)?;
                    let rep = hds::hds_identities_check(&t, &cp, None)?;
                    out.say(format!(
                        "identities hold over {} cosets; Σψ = {:.9} ≥ 2^(n(1-r)) = {}",
                        rep.cosets_checked, rep.sum_psi, rep.lower_bound
                    ));
                    t
                }
                HdsMethod::Soft => hds::hds_soft(&p, range.clone(), budget)?,
                HdsMethod::Hard => hds::hds_hard(&p, range.clone(), budget)?,
                HdsMethod::Fast => hds::hds_fast(&p, &spectrum()?, range.clone(), None)?,
                HdsMethod::Binomial => hds::hds_binomial(&p, &spectrum()?),
                HdsMethod::Mixed => hds::hds_mixed(&p, &spectrum()?, MixedPlan::for_n(*n), budget)?,
            };
            let mut table = Table::new("hds", &["d", "psi", "method"], params);
            hds_rows(&mut table, &t, range);
            for row in &table.rows {
                if let (Cell::Int(d), Cell::Float(v), Cell::Text(m)) = (&row[0], &row[1], &row[2]) {
                    out.say(format!("psi({d};{n}) = {v:.9e} [{m}]"));
                }
            }
            out.tables.push(table);
        }
        Command::ShiftDist { n, rate, d, scope, bins, theory } => {
            let p = code_params(*n, rate)?;
            let (cs, gap) = parse_scope(scope, *n, *d)?;
            let params = merge(
                json!({ "n": n, "d": d, "scope": scope, "bins": bins, "theory": theory }),
                rate_json(rate),
            );
            let h = shift::shift_census_with(*d, &p, &cs, budget)?;
            let mut t = Table::new("shift_dist", &["w", "fW", "scope"], params);
            census_rows(&mut t, &h, *bins, scope);
            out.say(format!("{} shifts, symmetric = {}", h.total(), h.is_symmetric()));
            if *theory {
                let profile = match gap {
                    Some(k) => WProfile::GapAt(k),
                    None if d == n => WProfile::Full,
                    None => WProfile::Generic { d: *d },
                };
                let f = ccs::solve_asymptotic_ccs(p.r(), 4096, ccs::DEFAULT_TOL)?;
                let th = shift::theoretical_w_pdf(profile, &f, &p)?;
                let l1: f64 = h
                    .rebin(*bins)
                    .iter()
                    .map(|(w, v)| (v - th.eval(*w)).abs())
                    .sum::<f64>()
                    * (2.0 / *bins as f64);
                out.say(format!("L1 distance to the {profile} density: {l1:.4e}"));
                theory_rows(&mut t, &th, *bins, &format!("theory-{profile}"));
            }
            out.tables.push(t);
        }
        Command::PsiClosed { r, rmin, rmax, steps } => {
            let rates: Vec<f64> = match (r, rmin, rmax) {
                (Some(r), _, _) => vec![*r],
                (None, Some(a), Some(b)) => {
                    if *steps < 2 {
                        return Err(Failure::usage("--steps must be at least 2"));
                    }
                    (0..*steps).map(|i| a + (b - a) * i as f64 / (*steps - 1) as f64).collect()
                }
                _ => return Err(Failure::usage("give --r or both --rmin and --rmax")),
            };
            let params = json!({ "r": r, "rmin": rmin, "rmax": rmax, "steps": steps });
            let t = psi_closed_table(&rates, params)?;
            if rates.len() == 1 {
                let (p1, p2) = (convergence::psi1_closed(rates[0])?, convergence::psi2_closed(rates[0])?);
                out.say(format!(
                    "psi(1) = {:.12} (J1 = {}), psi(2) = {:.12} (J21 = {}, J22 = {})",
                    p1.value, p1.j1, p2.value, p2.j21, p2.j22
                ));
            } else {
                out.say(format!("{} rates in [{}, {}]", rates.len(), rates[0], rates[rates.len() - 1]));
            }
            out.tables.push(t);
        }
        Command::Psi3 { alpha, n, nmin, soft, audit } => {
            let rate = parse_alpha(alpha)?;
            let lo = nmin.unwrap_or(*n);
            if lo > *n || lo < 3 {
                return Err(Failure::usage("need 3 ≤ --nmin ≤ --n"));
            }
            let params = json!({ "alpha": alpha, "n": n, "nmin": nmin, "soft": soft });
            let t = psi3_table("psi3", &rate, lo..=*n, *soft, budget, params)?;
            let v = convergence::psi3_analytic(&rate, *n)?;
            let pairs: Vec<String> = v.zero_pairs.pairs.iter().map(|(i, j)| format!("({i},{j})")).collect();
            out.say(format!("zero pairs P = {{{}}}", pairs.join(",")));
            out.say(format!("psi(3;{n}) = {:.12}", v.value));
            if v.stabilized {
                out.say(format!("psi(3;n) = {} for n ≥ {}", v.closed_form(), v.horizon));
            } else {
                out.say(format!(
                    "warning: n = {n} is below the stabilisation horizon {}; value is the truncated species sum",
                    v.horizon
                ));
            }
            out.tables.push(t);
            if *audit {
                out.tables.push(audit_table(&rate, json!({ "alpha": alpha }))?);
            }
        }
        Command::Reproduce { target } => return crate::reproduce::run(*target, budget),
    }
    Ok(out)
}

fn grid_from_counts(counts: &[u64]) -> Result<SpectrumGrid, Failure> {
    let mut g = SpectrumGrid::from_values(counts.iter().map(|&c| c as f64).collect())?;
    g.normalize();
    Ok(g)
}

pub fn psi_closed_table(rates: &[f64], params: Value) -> Result<Table, Failure> {
    let mut t = Table::new("psi_closed", &["r", "psi1", "psi2", "j1", "j21", "j22"], params);
    for &r in rates {
        let p1 = convergence::psi1_closed(r)?;
        let p2 = convergence::psi2_closed(r)?;
        t.push(vec![r.into(), p1.value.into(), p2.value.into(), p1.j1.into(), p2.j21.into(), p2.j22.into()]);
    }
    Ok(t)
}

pub fn psi3_table(
    stem: &str,
    rate: &AlgebraicRate,
    ns: std::ops::RangeInclusive<u32>,
    soft: bool,
    budget: &Budget,
    params: Value,
) -> Result<Table, Failure> {
    let mut t = Table::new(stem, &["n", "psi", "kind"], params);
    for n in ns {
        let v = convergence::psi3_analytic(rate, n)?;
        let kind = if v.stabilized { "analytic" } else { "analytic-truncated" };
        t.push(vec![n.into(), v.value.into(), kind.into()]);
        if soft {
            let p = CodeParams::with_rate(n, rate.clone())?;
            let s = hds::hds_soft(&p, 3..=3, budget)?.psi(3).unwrap();
            t.push(vec![n.into(), s.into(), "soft".into()]);
        }
    }
    Ok(t)
}

pub fn audit_table(rate: &AlgebraicRate, params: Value) -> Result<Table, Failure> {
    let mut t = Table::new(
        "species_audit",
        &["genus", "species", "reduced", "class", "J", "contribution"],
        params,
    );
    for scan in convergence::species_audit(rate)? {
        for s in &scan.species {
            let (class, j, c) = match &s.class {
                SpeciesClass::Extinct => ("extinct", "0".to_string(), String::new()),
                SpeciesClass::Immortal => ("immortal", "inf".to_string(), "inf".to_string()),
                SpeciesClass::Mortal { lifespan, contribution } => ("mortal", lifespan.to_string(), contribution.to_string()),
            };
            t.push(vec![
                scan.label().into(),
                s.to_string().into(),
                s.reduced.to_string().into(),
                class.into(),
                j.into(),
                c.into(),
            ]);
        }
    }
    Ok(t)
}
