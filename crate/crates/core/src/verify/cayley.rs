//! The constant-coefficient operator `Δ(∂)` and the Cayley identity
//! `Δ(∂)Δ(y)^λ = Δ(y)^{λ−1} Π_{j<r}(λ + jd/2)`.
//!
//! `Δ` is a homogeneous polynomial of degree `r` in the orthonormal
//! coordinates, so `Δ(∂) = Σ_m c_m ∂^m`. The coefficients come from exact
//! polarization: for a sorted index tuple `i₁ ≤ … ≤ i_r` with
//! multiplicities `m`,
//! `c_m = (1/m!) Σ_{S ⊆ {1..r}} (−1)^{r−|S|} Δ(Σ_{s∈S} e_{i_s})`.
//! Each `∂^m` is a product of central differences; the result is
//! Richardson-extrapolated in `h²`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::cone::classify_point;
use crate::error::{Error, Result};
use crate::jordan::{determinant, eigenvalues, AlgebraDescriptor, Element};
use crate::riesz::{
    cayley_rhs, classify_measure, recursion_constant, sign_obstruction, MeasureVerdict, Obstruction,
};
use crate::rng::Stream;
use crate::verify::report::VerificationReport;

/// One monomial `c·Π ∂_i^{k_i}` of `Δ(∂)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Monomial {
    pub coeff: f64,
    /// `(coordinate, order)` with distinct coordinates.
    pub powers: Vec<(usize, u32)>,
}

type Cache = Mutex<HashMap<AlgebraDescriptor, Arc<Vec<Monomial>>>>;

fn cache() -> &'static Cache {
    static CACHE: OnceLock<Cache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Monomials of `Δ` in orthonormal coordinates, computed once per algebra.
pub fn delta_polynomial(algebra: AlgebraDescriptor) -> Arc<Vec<Monomial>> {
    if let Some(p) = cache().lock().expect("cache lock").get(&algebra) {
        return p.clone();
    }
    let p = Arc::new(polarize(algebra));
    cache()
        .lock()
        .expect("cache lock")
        .insert(algebra, p.clone());
    p
}

fn polarize(algebra: AlgebraDescriptor) -> Vec<Monomial> {
    let (n, r) = (algebra.dim(), algebra.rank());
    let mut out = Vec::new();
    let mut tuple = vec![0usize; r];
    loop {
        let mut sum = 0.0;
        for mask in 1u32..(1 << r) {
            let mut coords = vec![0.0; n];
            for (s, &i) in tuple.iter().enumerate() {
                if mask & (1 << s) != 0 {
                    coords[i] += 1.0;
                }
            }
            let sign = if (r as u32 - mask.count_ones()).is_multiple_of(2) {
                1.0
            } else {
                -1.0
            };
            sum += sign * determinant(&Element::new(algebra, coords).expect("dimension matches"));
        }
        let mut powers: Vec<(usize, u32)> = Vec::new();
        for &i in &tuple {
            match powers.last_mut() {
                Some((j, k)) if *j == i => *k += 1,
                _ => powers.push((i, 1)),
            }
        }
        let multi_factorial: f64 = powers
            .iter()
            .map(|&(_, k)| (1..=k).product::<u32>() as f64)
            .product();
        let coeff = sum / multi_factorial;
        if coeff.abs() > 1e-10 {
            out.push(Monomial { coeff, powers });
        }
        // next nondecreasing tuple
        let mut pos = r;
        while pos > 0 && tuple[pos - 1] == n - 1 {
            pos -= 1;
        }
        if pos == 0 {
            break;
        }
        tuple[pos - 1] += 1;
        let v = tuple[pos - 1];
        for t in tuple.iter_mut().skip(pos) {
            *t = v;
        }
    }
    out
}

/// Central-difference stencil for `d^k/dx^k` as `(offset in steps, weight)`;
/// divide by `h^k`.
fn stencil(k: u32) -> Vec<(i32, f64)> {
    let second = [(-1, 1.0), (0, -2.0), (1, 1.0)];
    let mut s = if k % 2 == 1 {
        vec![(-1, -0.5), (1, 0.5)]
    } else {
        vec![(0, 1.0)]
    };
    for _ in 0..k / 2 {
        let mut next: HashMap<i32, f64> = HashMap::new();
        for &(a, wa) in &s {
            for &(b, wb) in &second {
                *next.entry(a + b).or_insert(0.0) += wa * wb;
            }
        }
        s = next.into_iter().filter(|(_, w)| *w != 0.0).collect();
        s.sort_by_key(|&(o, _)| o);
    }
    s
}

fn is_nonnegative_integer(x: f64) -> bool {
    x >= 0.0 && x == x.round()
}

/// `Δ(y)^λ`, as a polynomial when `λ` is a nonnegative integer.
fn delta_power(lambda: f64, x: &Element) -> f64 {
    let d = determinant(x);
    if is_nonnegative_integer(lambda) && lambda <= i32::MAX as f64 {
        d.powi(lambda as i32)
    } else {
        d.powf(lambda)
    }
}

/// Number of Richardson levels: exact for polynomial `Δ^λ`, four otherwise.
fn richardson_levels(algebra: AlgebraDescriptor, lambda: f64) -> usize {
    if is_nonnegative_integer(lambda) {
        let r = algebra.rank() as f64;
        let degree = r * lambda;
        (((degree - r).max(0.0) / 2.0).floor() as usize + 1).max(1)
    } else {
        4
    }
}

fn apply_at_step(monomials: &[Monomial], lambda: f64, y: &Element, h: f64) -> f64 {
    let mut values: HashMap<Vec<(usize, i32)>, f64> = HashMap::new();
    let mut total = 0.0;
    for m in monomials {
        let stencils: Vec<Vec<(i32, f64)>> = m.powers.iter().map(|&(_, k)| stencil(k)).collect();
        let order: u32 = m.powers.iter().map(|&(_, k)| k).sum();
        let mut acc = 0.0;
        let mut idx = vec![0usize; stencils.len()];
        loop {
            let mut weight = 1.0;
            let mut key = Vec::with_capacity(idx.len());
            for (slot, &(coord, _)) in m.powers.iter().enumerate() {
                let (off, w) = stencils[slot][idx[slot]];
                weight *= w;
                if off != 0 {
                    key.push((coord, off));
                }
            }
            let f = *values.entry(key.clone()).or_insert_with(|| {
                let mut coords = y.coords().to_vec();
                for &(c, off) in &key {
                    coords[c] += off as f64 * h;
                }
                delta_power(
                    lambda,
                    &Element::new(y.algebra(), coords).expect("dimension matches"),
                )
            });
            acc += weight * f;
            // odometer
            let mut s = 0;
            while s < idx.len() {
                idx[s] += 1;
                if idx[s] < stencils[s].len() {
                    break;
                }
                idx[s] = 0;
                s += 1;
            }
            if s == idx.len() {
                break;
            }
        }
        total += m.coeff * acc / h.powi(order as i32);
    }
    total
}

/// `Δ(∂)Δ^λ` at `y` by nested central differences, Richardson-extrapolated
/// in `h²`.
///
/// Polynomial `λ`: the ladder is `step, step/2, step/4, …`. Otherwise `step`
/// is the finest step and the ladder is `8·step, 4·step, 2·step, step`, so
/// rounding error is that of a single difference at `step`. Every stencil
/// point stays inside `Ω` when the smallest eigenvalue of `y` exceeds `r`
/// times the largest step.
pub fn delta_partial_apply(lambda: f64, y: &Element, step: f64) -> Result<f64> {
    let algebra = y.algebra();
    if !(step > 0.0) {
        return Err(Error::Domain(format!("step must be positive, got {step}")));
    }
    let polynomial = is_nonnegative_integer(lambda);
    let levels = richardson_levels(algebra, lambda);
    let coarsest = if polynomial {
        step
    } else {
        step * f64::from(1u32 << (levels - 1))
    };
    if !polynomial {
        let min_eigenvalue = *eigenvalues(y)?.last().expect("rank >= 1");
        if min_eigenvalue <= algebra.rank() as f64 * coarsest {
            return Err(Error::StepTooLarge {
                step: coarsest,
                min_eigenvalue,
            });
        }
    }
    let monomials = delta_polynomial(algebra);
    let mut table: Vec<Vec<f64>> = Vec::with_capacity(levels);
    for j in 0..levels {
        let h = coarsest / f64::from(1u32 << j);
        let mut row = vec![apply_at_step(&monomials, lambda, y, h)];
        for m in 1..=j {
            let factor = 4f64.powi(m as i32) - 1.0;
            let v = row[m - 1] + (row[m - 1] - table[j - 1][m - 1]) / factor;
            row.push(v);
        }
        table.push(row);
    }
    Ok(table[levels - 1][levels - 1])
}

/// `Δ(−∂)Δ^λ = (−1)^r Δ(∂)Δ^λ`.
pub fn delta_minus_partial_apply(lambda: f64, y: &Element, step: f64) -> Result<f64> {
    let sign = if y.algebra().rank().is_multiple_of(2) {
        1.0
    } else {
        -1.0
    };
    Ok(sign * delta_partial_apply(lambda, y, step)?)
}

/// Default step: 0.5 for polynomial cases, `1e−2·λ_min(y)` otherwise.
pub fn default_step(lambda: f64, y: &Element) -> Result<f64> {
    if is_nonnegative_integer(lambda) {
        Ok(0.5)
    } else {
        Ok(1e-2 * eigenvalues(y)?.last().expect("rank >= 1"))
    }
}

fn point_label(y: &Element) -> String {
    let coords: Vec<String> = y.coords().iter().map(|c| format!("{c}")).collect();
    format!("[{}]", coords.join(","))
}

/// Compares `Δ(∂)Δ^λ` with the closed form for each `(λ, y)`.
/// Tolerance: 1e−6 relative for nonnegative integer `λ`, 1e−3 otherwise.
pub fn cayley_check(lambdas: &[f64], points: &[Element]) -> Result<Vec<VerificationReport>> {
    let mut out = Vec::new();
    for &lambda in lambdas {
        for y in points {
            let step = default_step(lambda, y)?;
            let lhs = delta_partial_apply(lambda, y, step)?;
            let rhs = cayley_rhs(lambda.into(), y)?.re;
            let tolerance = if is_nonnegative_integer(lambda) {
                1e-6
            } else {
                1e-3
            };
            out.push(
                VerificationReport::relative("cayley", rhs, lhs, tolerance)
                    .params(format!(
                        "algebra={} lambda={lambda} y={}",
                        y.algebra(),
                        point_label(y)
                    ))
                    .step(step),
            );
        }
    }
    Ok(out)
}

/// `e` plus `extra` random interior points `P(a)e = a²` with `a` a small
/// perturbation of `e`.
pub fn cayley_points(algebra: AlgebraDescriptor, extra: usize, seed: u64) -> Vec<Element> {
    let mut stream = Stream::new(seed);
    let e = Element::identity(algebra);
    let mut out = vec![e.clone()];
    while out.len() < extra + 1 {
        let z: Vec<f64> = (0..algebra.dim())
            .map(|_| stream.uniform_in(-0.3, 0.3))
            .collect();
        let a = e.axpy(1.0, &Element::new(algebra, z).expect("dimension matches"));
        let y = a.square();
        if classify_point(&y)
            .map(|m| m.min_eigenvalue > 0.05)
            .unwrap_or(false)
        {
            out.push(y);
        }
    }
    out
}

/// For `α` in the gap `((r−2)d/2, (r−1)d/2)`: `Δ(−∂)Δ^{−α}` at `e` must be
/// negative (it equals `C_α < 0`), and both the classifier and the descent
/// test must rule `α` out. Also compares the value with `C_α` at 1e−3.
pub fn sign_obstruction_check(
    algebra: AlgebraDescriptor,
    count: usize,
    seed: u64,
) -> Result<Vec<VerificationReport>> {
    let mut stream = Stream::new(seed);
    let hi = algebra.threshold();
    let lo = hi - algebra.half_d();
    let e = Element::identity(algebra);
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let alpha = lo + (hi - lo) * (0.01 + 0.98 * stream.uniform());
        let step = default_step(-alpha, &e)?;
        let lhs = delta_minus_partial_apply(-alpha, &e, step)?;
        let target = recursion_constant(algebra, alpha.into()).re;
        let verdict = classify_measure(algebra, alpha.into()).verdict;
        let mut report = VerificationReport::relative("sign_obstruction", target, lhs, 1e-3);
        report.passed = report.passed
            && lhs < 0.0
            && verdict == MeasureVerdict::NotAMeasure
            && sign_obstruction(algebra, alpha) == Obstruction::Forbidden;
        out.push(
            report
                .params(format!("algebra={algebra} alpha={alpha} y=e"))
                .seed(seed)
                .step(step),
        );
    }
    Ok(out)
}
