//! Exact representation and calculus for the outgoing-wave function
//! families: finite sums of (polynomial in x, y, t) × complex-exponential
//! carrier, plus a separate radial family amplitude · r^p · exp(i k0 r).
//!
//! Everything here is closed-form: evaluation, Cartesian derivatives and
//! θ-derivatives of plane waves at θ = 0 are computed symbolically, exact
//! to floating-point rounding. Values are immutable and all operations are
//! pure.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest θ-derivative order the symbolic recurrence accepts.
pub const MAX_THETA_ORDER: u32 = 12;

/// Governing-equation context: frequency domain with a given wavenumber, or
/// time domain with unit velocity and unit angular frequency for all
/// carriers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum WaveContext {
    FrequencyDomain { k0: f64 },
    TimeDomain,
}

impl WaveContext {
    pub fn frequency(k0: f64) -> Result<Self> {
        if !(k0 > 0.0) || !k0.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "wavenumber must be positive and finite, got {k0}"
            )));
        }
        Ok(WaveContext::FrequencyDomain { k0 })
    }

    pub fn time() -> Self {
        WaveContext::TimeDomain
    }

    /// Wavenumber of the carriers: k0 in frequency domain, 1 in time domain.
    pub fn wavenumber(self) -> f64 {
        match self {
            WaveContext::FrequencyDomain { k0 } => k0,
            WaveContext::TimeDomain => 1.0,
        }
    }

    /// Angular frequency of the carriers: 0 in frequency domain, 1 in time
    /// domain.
    pub fn omega(self) -> f64 {
        match self {
            WaveContext::FrequencyDomain { .. } => 0.0,
            WaveContext::TimeDomain => 1.0,
        }
    }

    /// Quarter-wavelength integration limit: π/(2 k0) in frequency domain,
    /// π/2 in time domain.
    pub fn default_delta(self) -> f64 {
        std::f64::consts::FRAC_PI_2 / self.wavenumber()
    }
}

/// Differentiation axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
    T,
}

/// A point (x, y, t); t is ignored by frequency-domain functions, whose
/// carriers have ω = 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
    pub t: f64,
}

impl Point {
    pub fn new(x: f64, y: f64, t: f64) -> Self {
        Point { x, y, t }
    }

    pub fn xy(x: f64, y: f64) -> Self {
        Point { x, y, t: 0.0 }
    }

    pub fn origin() -> Self {
        Point {
            x: 0.0,
            y: 0.0,
            t: 0.0,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.t.is_finite()
    }
}

/// Carrier wave exp(i(kx·x + ky·y + ω·t)).
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct Carrier {
    pub kx: f64,
    pub ky: f64,
    pub omega: f64,
}

impl Carrier {
    pub fn new(kx: f64, ky: f64, omega: f64) -> Self {
        // normalize -0.0 so identical carriers merge
        Carrier {
            kx: kx + 0.0,
            ky: ky + 0.0,
            omega: omega + 0.0,
        }
    }

    pub fn phase_at(&self, pt: Point) -> f64 {
        self.kx * pt.x + self.ky * pt.y + self.omega * pt.t
    }

    /// (i kx)^mx (i ky)^my (i ω)^mt — the symbol of a mixed derivative on
    /// this carrier.
    pub fn symbol_factor(&self, mx: u32, my: u32, mt: u32) -> Complex64 {
        let i = Complex64::new(0.0, 1.0);
        (i * self.kx).powu(mx) * (i * self.ky).powu(my) * (i * self.omega).powu(mt)
    }

    fn negated(&self) -> Carrier {
        Carrier::new(-self.kx, -self.ky, -self.omega)
    }
}

impl PartialEq for Carrier {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == std::cmp::Ordering::Equal
    }
}

impl Eq for Carrier {}

impl PartialOrd for Carrier {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Carrier {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.kx
            .total_cmp(&other.kx)
            .then(self.ky.total_cmp(&other.ky))
            .then(self.omega.total_cmp(&other.omega))
    }
}

/// Monomial exponents (a, b, c) for x^a y^b t^c.
pub type Powers = (u32, u32, u32);

type PolyTable = BTreeMap<Powers, Complex64>;

fn table_add(table: &mut PolyTable, key: Powers, value: Complex64) {
    let entry = table.entry(key).or_insert(Complex64::ZERO);
    *entry += value;
    if entry.re == 0.0 && entry.im == 0.0 {
        table.remove(&key);
    }
}

fn table_eval(table: &PolyTable, pt: Point) -> Complex64 {
    let mut acc = Complex64::ZERO;
    for (&(a, b, c), &coeff) in table {
        acc += coeff * pt.x.powi(a as i32) * pt.y.powi(b as i32) * pt.t.powi(c as i32);
    }
    acc
}

/// Finite sum of (polynomial in x, y, t) × exp(i(kx·x + ky·y + ω·t)) terms.
///
/// Polynomial tables never store exactly-zero coefficients, and terms with
/// empty tables are dropped, so the zero function has no terms.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyExpFunction {
    terms: BTreeMap<Carrier, PolyTable>,
}

impl PolyExpFunction {
    pub fn zero() -> Self {
        PolyExpFunction {
            terms: BTreeMap::new(),
        }
    }

    /// Pure carrier exp(i(kx·x + ky·y + ω·t)).
    pub fn plane_wave(kx: f64, ky: f64, omega: f64) -> Self {
        let mut table = PolyTable::new();
        table.insert((0, 0, 0), Complex64::ONE);
        let mut terms = BTreeMap::new();
        terms.insert(Carrier::new(kx, ky, omega), table);
        PolyExpFunction { terms }
    }

    /// Build a single-carrier function from explicit monomials.
    pub fn from_monomials(carrier: Carrier, monomials: &[(Powers, Complex64)]) -> Self {
        let mut f = PolyExpFunction::zero();
        for &(powers, coeff) in monomials {
            f.add_monomial(carrier, powers, coeff);
        }
        f
    }

    pub fn add_monomial(&mut self, carrier: Carrier, powers: Powers, coeff: Complex64) {
        if coeff.re == 0.0 && coeff.im == 0.0 {
            return;
        }
        let table = self.terms.entry(carrier).or_default();
        table_add(table, powers, coeff);
        if self.terms[&carrier].is_empty() {
            self.terms.remove(&carrier);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn carriers(&self) -> impl Iterator<Item = Carrier> + '_ {
        self.terms.keys().copied()
    }

    pub fn num_carriers(&self) -> usize {
        self.terms.len()
    }

    /// Coefficient of x^a y^b t^c on the given carrier (zero if absent).
    pub fn coefficient(&self, carrier: Carrier, powers: Powers) -> Complex64 {
        self.terms
            .get(&carrier)
            .and_then(|t| t.get(&powers))
            .copied()
            .unwrap_or(Complex64::ZERO)
    }

    pub fn monomials(&self, carrier: Carrier) -> Vec<(Powers, Complex64)> {
        self.terms
            .get(&carrier)
            .map(|t| t.iter().map(|(&p, &c)| (p, c)).collect())
            .unwrap_or_default()
    }

    pub fn evaluate(&self, pt: Point) -> Complex64 {
        let mut acc = Complex64::ZERO;
        for (carrier, table) in &self.terms {
            acc += table_eval(table, pt) * Complex64::cis(carrier.phase_at(pt));
        }
        acc
    }

    /// Exact derivative: per term, ∂(p·E) = (∂p + i·k·p)·E, repeated `order`
    /// times along the given axis.
    pub fn differentiate(&self, axis: Axis, order: u32) -> Self {
        let mut current = self.clone();
        for _ in 0..order {
            current = current.differentiate_once(axis);
        }
        current
    }

    fn differentiate_once(&self, axis: Axis) -> Self {
        let mut out = PolyExpFunction::zero();
        for (carrier, table) in &self.terms {
            let k = match axis {
                Axis::X => carrier.kx,
                Axis::Y => carrier.ky,
                Axis::T => carrier.omega,
            };
            let ik = Complex64::new(0.0, k);
            for (&(a, b, c), &coeff) in table {
                // polynomial part
                match axis {
                    Axis::X if a > 0 => {
                        out.add_monomial(*carrier, (a - 1, b, c), coeff * a as f64)
                    }
                    Axis::Y if b > 0 => {
                        out.add_monomial(*carrier, (a, b - 1, c), coeff * b as f64)
                    }
                    Axis::T if c > 0 => {
                        out.add_monomial(*carrier, (a, b, c - 1), coeff * c as f64)
                    }
                    _ => {}
                }
                // carrier part
                out.add_monomial(*carrier, (a, b, c), coeff * ik);
            }
        }
        out
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        let mut out = PolyExpFunction::zero();
        for (carrier, table) in &self.terms {
            for (&powers, &coeff) in table {
                out.add_monomial(*carrier, powers, coeff * factor);
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (carrier, table) in &other.terms {
            for (&powers, &coeff) in table {
                out.add_monomial(*carrier, powers, coeff);
            }
        }
        out
    }

    /// Complex conjugate: coefficients conjugated, carriers negated. Exact
    /// for real points.
    pub fn conjugate(&self) -> Self {
        let mut out = PolyExpFunction::zero();
        for (carrier, table) in &self.terms {
            for (&powers, &coeff) in table {
                out.add_monomial(carrier.negated(), powers, coeff.conj());
            }
        }
        out
    }

    /// Maximum polynomial degree over all monomials (0 for pure carriers).
    pub fn degree(&self) -> u32 {
        self.terms
            .values()
            .flat_map(|t| t.keys())
            .map(|&(a, b, c)| a + b + c)
            .max()
            .unwrap_or(0)
    }
}

impl fmt::Display for PolyExpFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (carrier, table) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "[")?;
            let mut first_mono = true;
            for (&(a, b, c), &coeff) in table {
                if !first_mono {
                    write!(f, " + ")?;
                }
                first_mono = false;
                write!(f, "({:.3}{:+.3}i)", coeff.re, coeff.im)?;
                if a > 0 {
                    write!(f, " x^{a}")?;
                }
                if b > 0 {
                    write!(f, " y^{b}")?;
                }
                if c > 0 {
                    write!(f, " t^{c}")?;
                }
            }
            write!(
                f,
                "] exp(i({:.3}x{:+.3}y{:+.3}t))",
                carrier.kx, carrier.ky, carrier.omega
            )?;
        }
        Ok(())
    }
}

// Serialized as a list of {carrier, monomials} records so the JSON stays
// language-neutral (complex numbers as [re, im] pairs).
#[derive(Serialize, Deserialize)]
struct TermRepr {
    carrier: [f64; 3],
    monomials: Vec<MonomialRepr>,
}

#[derive(Serialize, Deserialize)]
struct MonomialRepr {
    powers: [u32; 3],
    coeff: [f64; 2],
}

impl Serialize for PolyExpFunction {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let reprs: Vec<TermRepr> = self
            .terms
            .iter()
            .map(|(carrier, table)| TermRepr {
                carrier: [carrier.kx, carrier.ky, carrier.omega],
                monomials: table
                    .iter()
                    .map(|(&(a, b, c), &coeff)| MonomialRepr {
                        powers: [a, b, c],
                        coeff: [coeff.re, coeff.im],
                    })
                    .collect(),
            })
            .collect();
        reprs.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for PolyExpFunction {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let reprs = Vec::<TermRepr>::deserialize(deserializer)?;
        let mut f = PolyExpFunction::zero();
        for term in reprs {
            let carrier = Carrier::new(term.carrier[0], term.carrier[1], term.carrier[2]);
            for mono in term.monomials {
                f.add_monomial(
                    carrier,
                    (mono.powers[0], mono.powers[1], mono.powers[2]),
                    Complex64::new(mono.coeff[0], mono.coeff[1]),
                );
            }
        }
        Ok(f)
    }
}

/// Sum of amplitude · r^p · exp(i k0 r) terms; p may be half-integer.
/// All terms share the same k0. Only radial derivatives are supported.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadialFunction {
    k0: f64,
    /// (amplitude, power) pairs, kept sorted by power.
    terms: Vec<(RadialAmplitude, f64)>,
}

type RadialAmplitude = Complex64;

impl RadialFunction {
    pub fn new(k0: f64, terms: &[(Complex64, f64)]) -> Self {
        let mut f = RadialFunction { k0, terms: Vec::new() };
        for &(amplitude, power) in terms {
            f.add_term(amplitude, power);
        }
        f
    }

    pub fn k0(&self) -> f64 {
        self.k0
    }

    pub fn terms(&self) -> &[(Complex64, f64)] {
        &self.terms
    }

    fn add_term(&mut self, amplitude: Complex64, power: f64) {
        if amplitude.re == 0.0 && amplitude.im == 0.0 {
            return;
        }
        match self.terms.binary_search_by(|(_, p)| p.total_cmp(&power)) {
            Ok(idx) => {
                self.terms[idx].0 += amplitude;
                if self.terms[idx].0 == Complex64::ZERO {
                    self.terms.remove(idx);
                }
            }
            Err(idx) => self.terms.insert(idx, (amplitude, power)),
        }
    }

    /// Evaluate at radius r > 0.
    pub fn evaluate(&self, r: f64) -> Complex64 {
        debug_assert!(r > 0.0, "radial functions require r > 0");
        let phase = Complex64::cis(self.k0 * r);
        let mut acc = Complex64::ZERO;
        for &(amplitude, power) in &self.terms {
            acc += amplitude * r.powf(power);
        }
        acc * phase
    }

    /// Exact closed form: d/dr[A r^p e^{ik0 r}] = (A p r^{p−1} + i k0 A r^p) e^{ik0 r},
    /// applied `order` times. Order 0 returns the function unchanged.
    pub fn radial_derivative(&self, order: u32) -> Self {
        let mut current = self.clone();
        for _ in 0..order {
            let mut next = RadialFunction {
                k0: current.k0,
                terms: Vec::new(),
            };
            let ik0 = Complex64::new(0.0, current.k0);
            for &(amplitude, power) in &current.terms {
                if power != 0.0 {
                    next.add_term(amplitude * power, power - 1.0);
                }
                next.add_term(amplitude * ik0, power);
            }
            current = next;
        }
        current
    }
}

// --- θ-derivative recurrence -------------------------------------------
//
// Plane waves exp(±i φ(θ)) with φ(θ) = k(−x cos θ − y sin θ) + ω t are
// differentiated in θ by carrying a polynomial table in (x, y, cos θ, sin θ)
// with complex coefficients, then specialized at θ = 0: sin θ → 0,
// cos θ → 1, carrier → exp(i(∓k x + ±ω t)).

type ThetaKey = (u32, u32, u32, u32); // x^a y^b cos^p sin^q
type ThetaTable = BTreeMap<ThetaKey, Complex64>;

#[derive(Clone)]
struct ThetaPiece {
    /// +1 for exp(+iφ), −1 for exp(−iφ).
    sign: f64,
    table: ThetaTable,
}

fn theta_table_add(table: &mut ThetaTable, key: ThetaKey, value: Complex64) {
    let entry = table.entry(key).or_insert(Complex64::ZERO);
    *entry += value;
    if entry.re == 0.0 && entry.im == 0.0 {
        table.remove(&key);
    }
}

impl ThetaPiece {
    fn differentiate(&self, wavenumber: f64) -> ThetaPiece {
        let mut out = ThetaTable::new();
        // dφ/dθ = k(x sin θ − y cos θ)
        let chain = Complex64::new(0.0, self.sign) * wavenumber;
        for (&(a, b, p, q), &coeff) in &self.table {
            // d/dθ of cos^p sin^q
            if p > 0 {
                theta_table_add(&mut out, (a, b, p - 1, q + 1), -coeff * p as f64);
            }
            if q > 0 {
                theta_table_add(&mut out, (a, b, p + 1, q - 1), coeff * q as f64);
            }
            // (±i φ') × coeff
            theta_table_add(&mut out, (a + 1, b, p, q + 1), coeff * chain);
            theta_table_add(&mut out, (a, b + 1, p + 1, q), -coeff * chain);
        }
        ThetaPiece {
            sign: self.sign,
            table: out,
        }
    }

    /// Specialize at θ = 0 (sin θ = 0, cos θ = 1) and attach the carrier.
    fn specialize(&self, ctx: WaveContext, out: &mut PolyExpFunction) {
        let k = ctx.wavenumber();
        let omega = ctx.omega();
        let carrier = Carrier::new(-self.sign * k, 0.0, self.sign * omega);
        for (&(a, b, _p, q), &coeff) in &self.table {
            if q == 0 {
                out.add_monomial(carrier, (a, b, 0), coeff);
            }
        }
    }
}

fn theta_derivative_of(pieces: &[ThetaPiece], alpha: u32, ctx: WaveContext) -> Result<PolyExpFunction> {
    if alpha > MAX_THETA_ORDER {
        return Err(Error::InvalidParameter(format!(
            "θ-derivative order {alpha} exceeds cap {MAX_THETA_ORDER}"
        )));
    }
    let k = ctx.wavenumber();
    let mut current: Vec<ThetaPiece> = pieces.to_vec();
    for _ in 0..alpha {
        current = current.iter().map(|p| p.differentiate(k)).collect();
    }
    let mut out = PolyExpFunction::zero();
    for piece in &current {
        piece.specialize(ctx, &mut out);
    }
    Ok(out)
}

fn unit_piece(sign: f64, weight: Complex64) -> ThetaPiece {
    let mut table = ThetaTable::new();
    table.insert((0, 0, 0, 0), weight);
    ThetaPiece { sign, table }
}

/// d^α/dθ^α of the outgoing plane wave at θ = 0.
///
/// Time domain: carrier exp(i(−x cos θ − y sin θ + t)); frequency domain:
/// exp(i k0(−x cos θ − y sin θ)).
pub fn theta_derivative_plane_wave(alpha: u32, ctx: WaveContext) -> Result<PolyExpFunction> {
    theta_derivative_of(&[unit_piece(1.0, Complex64::ONE)], alpha, ctx)
}

/// d^α/dθ^α of cos(−x cos θ − y sin θ + t) at θ = 0 (time domain).
pub(crate) fn theta_derivative_cos(alpha: u32) -> Result<PolyExpFunction> {
    let half = Complex64::new(0.5, 0.0);
    theta_derivative_of(
        &[unit_piece(1.0, half), unit_piece(-1.0, half)],
        alpha,
        WaveContext::TimeDomain,
    )
}

/// d^α/dθ^α of sin(−x cos θ − y sin θ + t) at θ = 0 (time domain).
pub(crate) fn theta_derivative_sin(alpha: u32) -> Result<PolyExpFunction> {
    let half_over_i = Complex64::new(0.0, -0.5); // 1/(2i)
    theta_derivative_of(
        &[
            unit_piece(1.0, half_over_i),
            unit_piece(-1.0, -half_over_i),
        ],
        alpha,
        WaveContext::TimeDomain,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// The time-domain outgoing carrier exp(i(−x + t)).
    fn base_carrier() -> Carrier {
        Carrier::new(-1.0, 0.0, 1.0)
    }

    /// ψ_2 = (−y² + ix)·exp(i(−x+t)).
    fn psi2() -> PolyExpFunction {
        PolyExpFunction::from_monomials(
            base_carrier(),
            &[((0, 2, 0), c(-1.0, 0.0)), ((1, 0, 0), c(0.0, 1.0))],
        )
    }

    #[test]
    fn evaluate_zero_phase() {
        let f = PolyExpFunction::plane_wave(-1.0, 0.0, 1.0);
        assert_eq!(f.evaluate(Point::origin()), Complex64::ONE);
    }

    #[test]
    fn evaluate_psi2_at_point() {
        // ψ_2 at (1,2,0) → (−4+i)·exp(−i)
        let got = psi2().evaluate(Point::new(1.0, 2.0, 0.0));
        let want = c(-4.0, 1.0) * Complex64::cis(-1.0);
        assert_relative_eq!(got.re, want.re, max_relative = 1e-14);
        assert_relative_eq!(got.im, want.im, max_relative = 1e-14);
    }

    #[test]
    fn evaluate_oblique_plane_wave() {
        // exp(i k0(−x cos θ − y sin θ)), k0=1, θ=π/3, at (1,0,0) → exp(−0.5 i)
        let theta = std::f64::consts::FRAC_PI_3;
        let f = PolyExpFunction::plane_wave(-theta.cos(), -theta.sin(), 0.0);
        let got = f.evaluate(Point::new(1.0, 0.0, 0.0));
        let want = Complex64::cis(-0.5);
        assert_relative_eq!(got.re, want.re, max_relative = 1e-14);
        assert_relative_eq!(got.im, want.im, max_relative = 1e-14);
    }

    #[test]
    fn differentiate_time_carrier() {
        // ∂_t exp(i(−x+t)) = i·exp(i(−x+t))
        let f = PolyExpFunction::plane_wave(-1.0, 0.0, 1.0);
        let df = f.differentiate(Axis::T, 1);
        assert_eq!(df.coefficient(base_carrier(), (0, 0, 0)), c(0.0, 1.0));
        assert_eq!(df.monomials(base_carrier()).len(), 1);
    }

    #[test]
    fn differentiate_product_rule() {
        // ∂_x[(−y²+ix)·exp(i(−x+t))] = (x + i + i y²)·exp(i(−x+t))
        let df = psi2().differentiate(Axis::X, 1);
        assert_eq!(df.coefficient(base_carrier(), (1, 0, 0)), c(1.0, 0.0));
        assert_eq!(df.coefficient(base_carrier(), (0, 0, 0)), c(0.0, 1.0));
        assert_eq!(df.coefficient(base_carrier(), (0, 2, 0)), c(0.0, 1.0));
        assert_eq!(df.monomials(base_carrier()).len(), 3);
    }

    #[test]
    fn differentiate_to_zero() {
        // ∂_y² [−iy·exp(i(−x+t))] = 0 because ky = 0 and the polynomial is
        // degree 1 in y.
        let f = PolyExpFunction::from_monomials(base_carrier(), &[((0, 1, 0), c(0.0, -1.0))]);
        assert!(f.differentiate(Axis::Y, 2).is_zero());
    }

    #[test]
    fn mixed_derivatives_commute() {
        let f = psi2();
        let a = f.differentiate(Axis::X, 1).differentiate(Axis::T, 1);
        let b = f.differentiate(Axis::T, 1).differentiate(Axis::X, 1);
        assert_eq!(a, b);
    }

    #[test]
    fn derivative_matches_finite_difference() {
        use rand::Rng;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(31);
        for _ in 0..40 {
            let carrier = Carrier::new(
                rng.random_range(-2.0..2.0),
                rng.random_range(-2.0..2.0),
                rng.random_range(-2.0..2.0),
            );
            let mut f = PolyExpFunction::zero();
            for _ in 0..4 {
                f.add_monomial(
                    carrier,
                    (
                        rng.random_range(0..=4u32),
                        rng.random_range(0..=4u32),
                        rng.random_range(0..=4u32),
                    ),
                    c(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0)),
                );
            }
            if f.is_zero() {
                continue;
            }
            let pt = Point::new(
                rng.random_range(-1.0..1.0),
                rng.random_range(-1.0..1.0),
                rng.random_range(-1.0..1.0),
            );
            let axis = [Axis::X, Axis::Y, Axis::T][rng.random_range(0..3)];
            let h = 1e-5;
            let shift = |p: Point, d: f64| match axis {
                Axis::X => Point::new(p.x + d, p.y, p.t),
                Axis::Y => Point::new(p.x, p.y + d, p.t),
                Axis::T => Point::new(p.x, p.y, p.t + d),
            };
            let fd = (f.evaluate(shift(pt, h)) - f.evaluate(shift(pt, -h))) / (2.0 * h);
            let exact = f.differentiate(axis, 1).evaluate(pt);
            let scale = exact.norm().max(1.0);
            assert!(
                (fd - exact).norm() / scale < 1e-6,
                "finite difference mismatch: fd={fd}, exact={exact}"
            );
        }
    }

    #[test]
    fn evaluation_is_linear() {
        let f = psi2();
        let g = PolyExpFunction::plane_wave(0.7, -0.3, 1.0);
        let (a, b) = (c(1.3, -0.4), c(-0.2, 2.1));
        let pt = Point::new(0.3, -1.1, 0.7);
        let lhs = f.scale(a).add(&g.scale(b)).evaluate(pt);
        let rhs = a * f.evaluate(pt) + b * g.evaluate(pt);
        assert!((lhs - rhs).norm() <= 1e-13 * rhs.norm().max(1.0));
    }

    #[test]
    fn radial_derivative_order_zero_is_identity() {
        let f = RadialFunction::new(2.0, &[(c(1.0, 0.5), -0.5), (c(0.0, 1.0), -1.5)]);
        assert_eq!(f.radial_derivative(0), f);
    }

    #[test]
    fn radial_derivative_product_rule() {
        // d/dr[(k0 r)^{-1/2} e^{ik0 r}] = (−½ k0^{−1/2} r^{−3/2} + i k0^{1/2} r^{−1/2}) e^{ik0 r}
        let k0 = 2.0;
        let f = RadialFunction::new(k0, &[(c(k0.powf(-0.5), 0.0), -0.5)]);
        let df = f.radial_derivative(1);
        let r = 1.7;
        let want = (c(-0.5 * k0.powf(-0.5), 0.0) * r.powf(-1.5)
            + c(0.0, k0.sqrt()) * r.powf(-0.5))
            * Complex64::cis(k0 * r);
        let got = df.evaluate(r);
        assert_relative_eq!(got.re, want.re, max_relative = 1e-13);
        assert_relative_eq!(got.im, want.im, max_relative = 1e-13);
    }

    #[test]
    fn radial_second_derivative_matches_closed_form() {
        // Second derivative of (k0 r)^{−1/2} e^{ik0 r} equals
        // −(k0² r² + i k0 r − 3/4)/r^{5/2} · k0^{−1/2} e^{ik0 r}.
        let (k0, r) = (1.0, 2.0);
        let f = RadialFunction::new(k0, &[(c(k0.powf(-0.5), 0.0), -0.5)]);
        let got = f.radial_derivative(2).evaluate(r);
        let want = -(c(k0 * k0 * r * r, 0.0) + c(0.0, k0 * r) - c(0.75, 0.0))
            / r.powf(2.5)
            * k0.powf(-0.5)
            * Complex64::cis(k0 * r);
        assert_relative_eq!(got.re, want.re, max_relative = 1e-13);
        assert_relative_eq!(got.im, want.im, max_relative = 1e-13);
    }

    /// The explicit ψ_0..ψ_4 tables for the time-domain θ-derivative family.
    fn golden_psi(alpha: u32) -> PolyExpFunction {
        let e = base_carrier();
        match alpha {
            0 => PolyExpFunction::from_monomials(e, &[((0, 0, 0), c(1.0, 0.0))]),
            1 => PolyExpFunction::from_monomials(e, &[((0, 1, 0), c(0.0, -1.0))]),
            2 => PolyExpFunction::from_monomials(
                e,
                &[((0, 2, 0), c(-1.0, 0.0)), ((1, 0, 0), c(0.0, 1.0))],
            ),
            3 => PolyExpFunction::from_monomials(
                e,
                &[
                    ((0, 1, 0), c(0.0, 1.0)),
                    ((0, 3, 0), c(0.0, 1.0)),
                    ((1, 1, 0), c(3.0, 0.0)),
                ],
            ),
            4 => PolyExpFunction::from_monomials(
                e,
                &[
                    ((1, 0, 0), c(0.0, -1.0)),
                    ((2, 0, 0), c(-3.0, 0.0)),
                    ((0, 2, 0), c(4.0, 0.0)),
                    ((0, 4, 0), c(1.0, 0.0)),
                    ((1, 2, 0), c(0.0, -6.0)),
                ],
            ),
            _ => unreachable!(),
        }
    }

    #[test]
    fn theta_derivatives_match_explicit_list() {
        for alpha in 0..=4 {
            let got = theta_derivative_plane_wave(alpha, WaveContext::TimeDomain).unwrap();
            assert_eq!(got, golden_psi(alpha), "ψ_{alpha} coefficient table");
        }
    }

    #[test]
    fn theta_derivative_frequency_domain_scales() {
        // α=1, k0=2 → −2iy·exp(−2ix)
        let ctx = WaveContext::frequency(2.0).unwrap();
        let got = theta_derivative_plane_wave(1, ctx).unwrap();
        let carrier = Carrier::new(-2.0, 0.0, 0.0);
        assert_eq!(got.coefficient(carrier, (0, 1, 0)), c(0.0, -2.0));
        assert_eq!(got.monomials(carrier).len(), 1);
        assert_eq!(got.num_carriers(), 1);
    }

    #[test]
    fn theta_derivative_numerical_check() {
        // Compare the symbolic α=3 result against a 4th-order central
        // finite difference in θ of the plane-wave family.
        let ctx = WaveContext::frequency(1.0).unwrap();
        let f = theta_derivative_plane_wave(3, ctx).unwrap();
        let pt = Point::new(0.4, -0.8, 0.0);
        let wave_at = |theta: f64| {
            PolyExpFunction::plane_wave(-theta.cos(), -theta.sin(), 0.0).evaluate(pt)
        };
        let h = 1e-3;
        let fd = (wave_at(2.0 * h) - wave_at(h) * 2.0 + wave_at(-h) * 2.0 - wave_at(-2.0 * h))
            / (2.0 * h * h * h);
        let exact = f.evaluate(pt);
        assert!(
            (fd - exact).norm() < 1e-5 * exact.norm().max(1.0),
            "θ-derivative mismatch: fd={fd} exact={exact}"
        );
    }

    #[test]
    fn theta_cap_enforced() {
        let err = theta_derivative_plane_wave(MAX_THETA_ORDER + 1, WaveContext::TimeDomain);
        assert!(err.is_err());
    }

    #[test]
    fn conjugate_roundtrip_on_real_points() {
        let f = psi2();
        let pt = Point::new(0.3, 1.2, -0.5);
        let got = f.conjugate().evaluate(pt);
        let want = f.evaluate(pt).conj();
        assert!((got - want).norm() < 1e-14);
    }

    #[test]
    fn polyexp_serde_roundtrip_is_exact() {
        let f = psi2();
        let json = serde_json::to_string(&f).unwrap();
        let back: PolyExpFunction = serde_json::from_str(&json).unwrap();
        assert_eq!(f, back);
    }
}
