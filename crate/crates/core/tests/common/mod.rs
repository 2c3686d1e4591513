//! Property checks shared by the property suite and the acceptance runner.
//! Each check returns the number of cases examined or a description of the
//! first counterexample.
#![allow(dead_code)]

use oac_core::algebra::{AlgebraicRate, Poly};
use oac_core::bitseq::{encode, partition_cosets, projection_trace, BitBlock};
use oac_core::convergence::{scan_genus, Species, SpeciesClass};
use oac_core::hds::{hds_exhaustive_from, hds_identities_check};
use oac_core::shift::{coexisting_interval, coexists, tau, IndexSet};
use oac_core::{Budget, CodeParams};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub type Check = Result<u64, String>;

pub const SEED: u64 = 0x5eed_2016;
pub const RANDOM_SAMPLES: usize = 10_000;

fn word(bits: u64, n: u32) -> BitBlock {
    BitBlock::new(bits, n).unwrap()
}

fn ells(p: &CodeParams) -> Vec<f64> {
    let n = p.n();
    (0..1u64 << n).map(|b| encode(&word(b, n), p).unwrap().ell).collect()
}

fn close(a: f64, b: f64, scale: f64) -> bool {
    (a - b).abs() <= 1e-9 * scale.max(1.0)
}

pub fn tau_antisymmetry(p: &CodeParams, j: u64, b: u64) -> Check {
    let j = IndexSet::from_mask(j);
    let d = j.d();
    let b = word(b, d);
    let (t, u) = (tau(&j, &b, p).unwrap(), tau(&j, &b.complement(), p).unwrap());
    if t != -u {
        return Err(format!("τ({j}, {b}) = {t} but τ of the complement is {u}"));
    }
    Ok(1)
}

pub fn translation(p: &CodeParams, ell: &[f64], x: u64, j: u64) -> Check {
    let n = p.n();
    let js = IndexSet::from_mask(j);
    let xb = word(x, n);
    let t = tau(&js, &xb.restrict(&js).unwrap(), p).unwrap();
    let (lx, ly) = (ell[x as usize], ell[(x ^ j) as usize]);
    if !close(ly, lx + t, lx.abs() + t.abs()) {
        return Err(format!("ℓ({xb} ⊕ {js}) = {ly} but ℓ + τ = {}", lx + t));
    }
    Ok(1)
}

pub fn mirror(p: &CodeParams, m: u64, j: u64, b: u64) -> Check {
    let js = IndexSet::from_mask(j);
    let bb = word(b, js.d());
    let t = tau(&js, &bb, p).unwrap();
    let a = coexisting_interval(m, &js, &bb, p).unwrap();
    let c = coexisting_interval(m, &js, &bb.complement(), p).unwrap();
    if a.empty != c.empty {
        return Err(format!("mirror intervals of {js}/{bb} disagree on emptiness"));
    }
    if a.empty {
        return Ok(1);
    }
    let mf = m as f64;
    let ok_shift = close(c.lo, a.lo + t, mf) && close(c.hi, a.hi + t, mf);
    let ok_sym = close(a.lo + c.hi, 2.0 * mf - 1.0, mf) && close(a.hi + c.lo, 2.0 * mf - 1.0, mf);
    if !(ok_shift && ok_sym) {
        return Err(format!("mirror intervals of {js}/{bb} at m = {m}: {a:?} {c:?}"));
    }
    Ok(1)
}

pub fn coexistence(p: &CodeParams, x: u64, y: u64) -> Check {
    let n = p.n();
    let (xb, yb) = (word(x, n), word(y, n));
    let same = coexists(&xb, &yb, p).map_err(|e| e.to_string())?;
    if same {
        let js = IndexSet::from_mask(x ^ y);
        let t = tau(&js, &xb.restrict(&js).unwrap(), p).unwrap();
        if t.abs() >= 1.0 {
            return Err(format!("{xb} and {yb} coexist with |τ| = {}", t.abs()));
        }
    }
    Ok(1)
}

pub fn complement_and_trace(p: &CodeParams, x: u64) -> Check {
    let n = p.n();
    let xb = word(x, n);
    let e = encode(&xb, p).unwrap();
    let c = encode(&xb.complement(), p).unwrap();
    let top = 2f64.powf(p.nr()) - 1.0;
    if !close(e.ell + c.ell, top, top) {
        return Err(format!("ℓ({xb}) + ℓ(complement) = {} ≠ {top}", e.ell + c.ell));
    }
    if !(0.0..=top + 1e-9 * top).contains(&e.ell) || e.m > top as u64 {
        return Err(format!("ℓ({xb}) = {} or m = {} out of range", e.ell, e.m));
    }
    let tr = projection_trace(&xb, p).unwrap();
    let direct = e.m as f64 - e.ell;
    if (tr.u[n as usize] - direct).abs() >= 1e-9 {
        return Err(format!("U_n = {} but m − ℓ = {direct} for {xb}", tr.u[n as usize]));
    }
    Ok(1)
}

pub fn identities(p: &CodeParams) -> Check {
    let cp = partition_cosets(p).map_err(|e| e.to_string())?;
    if cp.coset(0) != [0] {
        return Err("C_0 is not {0^n}".into());
    }
    if cp.sizes().iter().sum::<usize>() != 1 << p.n() {
        return Err("coset sizes do not add up to 2^n".into());
    }
    let t = hds_exhaustive_from(&cp, &Budget::default()).map_err(|e| e.to_string())?;
    let rep = hds_identities_check(&t, &cp, None).map_err(|e| e.to_string())?;
    if rep.sum_psi < rep.lower_bound {
        return Err(format!("Σψ = {} below {}", rep.sum_psi, rep.lower_bound));
    }
    Ok(rep.cosets_checked as u64)
}

/// Every property over all words, index sets and pairs at this size.
pub fn exhaustive(p: &CodeParams) -> Check {
    let n = p.n();
    let full = 1u64 << n;
    let ell = ells(p);
    let count = p.coset_count().unwrap();
    let mut cases = 0;
    for j in 0..full {
        let d = j.count_ones();
        for b in 0..1u64 << d {
            cases += tau_antisymmetry(p, j, b)?;
            let m = 1 + (j.wrapping_mul(31).wrapping_add(b) % (count - 1));
            cases += mirror(p, m, j, b)?;
        }
        for x in 0..full {
            cases += translation(p, &ell, x, j)?;
        }
    }
    for x in 0..full {
        cases += complement_and_trace(p, x)?;
        for y in x + 1..full {
            cases += coexistence(p, x, y)?;
        }
    }
    cases += identities(p)?;
    Ok(cases)
}

/// Random instances of every per-word property.
pub fn randomized(p: &CodeParams, samples: usize, seed: u64) -> Check {
    let n = p.n();
    let full = 1u64 << n;
    let mut rng = StdRng::seed_from_u64(seed);
    let ell = ells(p);
    let count = p.coset_count().unwrap();
    let mut cases = 0;
    for _ in 0..samples {
        let x = rng.gen_range(0..full);
        let j = rng.gen_range(1..full);
        let b = rng.gen_range(0..1u64 << j.count_ones());
        let m = rng.gen_range(1..count);
        cases += tau_antisymmetry(p, j, b)?;
        cases += translation(p, &ell, x, j)?;
        cases += mirror(p, m, j, b)?;
        cases += coexistence(p, x, x ^ j)?;
        cases += complement_and_trace(p, x)?;
    }
    Ok(cases)
}

// (k, i, reduced, lifespan, contribution)
pub type Row = (u32, u32, &'static str, u32, &'static str);

pub const PLUS_MINUS: &[Row] = &[(3, 1, "2x", 1, "-2x^2+2x+1"), (2, 1, "x^2+x-1", 2, "x^2-x")];

pub const MINUS_PLUS: &[Row] = &[
    (7, 6, "x^2+1", 1, "x^2-2x+1"),
    (5, 3, "x^2+1", 1, "x^2-2x+1"),
    (4, 1, "x^2+1", 1, "x^2-2x+1"),
    (6, 5, "x+1", 1, "-x^2+2"),
    (4, 2, "x+1", 1, "-x^2+2"),
    (5, 4, "2", 2, "-2x^2+4"),
    (3, 1, "2", 2, "-2x^2+4"),
    (4, 3, "x^2", 2, "-x+2"),
    (3, 2, "-x^2+x+2", 3, "-x^2-x+4"),
    (2, 1, "x^2-x+1", 3, "x^2-2x+2"),
];

pub const MINUS_MINUS: &[Row] = &[
    (9, 8, "x^2+x-1", 2, "x^2-x"),
    (7, 5, "x^2+x-1", 2, "x^2-x"),
    (6, 3, "x^2+x-1", 2, "x^2-x"),
    (8, 7, "x", 3, "-x^2+3"),
    (6, 4, "x", 3, "-x^2+3"),
    (5, 2, "x", 3, "-x^2+3"),
    (7, 6, "x^2-1", 5, "-x+4"),
    (5, 3, "x^2-1", 5, "-x+4"),
    (4, 1, "x^2-1", 5, "-x+4"),
    (6, 5, "x-1", 8, "-x^2+7"),
    (4, 2, "x-1", 8, "-x^2+7"),
    (6, 2, "2x", 1, "-2x^2+2x+1"),
    (5, 1, "x^2", 2, "-x+2"),
    (4, 3, "x^2-2", 9, "-2x^2-x+11"),
    (3, 2, "-x^2+x", 7, "-2x+7"),
    (2, 1, "x^2-x-1", 6, "-2x^2+7"),
];

/// Compares one genus scan at `x^3 = x + 1` against its table.
pub fn check_genus(s1: i8, s0: i8, rows: &[Row], immortal: &[(u32, u32)]) -> Result<(), String> {
    let rate: AlgebraicRate = "x^3-x-1".parse().unwrap();
    let scan = scan_genus(s1, s0, &rate).map_err(|e| e.to_string())?;
    let mortal: Vec<&Species> = scan.mortal().collect();
    if mortal.len() != rows.len() {
        return Err(format!("{}: {} mortal species, expected {}", scan.label(), mortal.len(), rows.len()));
    }
    for &(k, i, red, life, contrib) in rows {
        let sp = mortal
            .iter()
            .find(|s| s.k == k && s.i == i)
            .ok_or_else(|| format!("{}: x^{k}{s1:+}x^{i}{s0:+} is not mortal", scan.label()))?;
        let want: Poly = red.parse().unwrap();
        let want_c: Poly = contrib.parse().unwrap();
        if sp.reduced != want || sp.lifespan() != Some(life) || sp.contribution() != Some(&want_c) {
            return Err(format!(
                "{sp}: got ({}, {:?}, {:?}), expected ({red}, {life}, {contrib})",
                sp.reduced,
                sp.lifespan(),
                sp.contribution().map(|c| c.to_string())
            ));
        }
    }
    let mut imm: Vec<(u32, u32)> = scan
        .species
        .iter()
        .filter(|s| s.class == SpeciesClass::Immortal)
        .map(|s| (s.k, s.i))
        .collect();
    imm.sort_unstable();
    if imm != immortal {
        return Err(format!("{}: immortal species {imm:?}, expected {immortal:?}", scan.label()));
    }
    Ok(())
}
