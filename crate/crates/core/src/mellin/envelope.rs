//! Decay envelopes in the log variable.
//!
//! An [`Envelope`] bounds `|f(e^x)| e^{cx}` for a fixed abscissa `c`. Each side
//! is described in terms of the distance `u >= 0` from the origin (`x = u` on
//! the right, `x = -u` on the left) as a sum of closed-form [`Term`]s, so tail
//! sums and truncation points can be computed without touching the integrand.
//! Everything is carried in log space to avoid underflow far out in the tails.

use std::f64::consts::LN_2;

/// Shape of a single decay term as a function of its argument `w >= 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Decay {
    /// `w^{-p}`.
    Algebraic { p: f64 },
    /// `w^d e^{-lambda w}`.
    PolyExp { d: f64, lambda: f64 },
    /// `exp(-e^w) e^{b w}`.
    SuperExp { b: f64 },
}

impl Decay {
    /// Smallest argument from which value, tail and moment bounds below hold.
    fn threshold(&self) -> f64 {
        match *self {
            Decay::Algebraic { .. } => 1.0,
            Decay::PolyExp { d, lambda } => (2.0 * (d + 1.0) / lambda).max(0.0),
            Decay::SuperExp { b } => (2.0 * b.abs().max(1.0)).ln().max(0.0),
        }
    }

    fn ln_value(&self, w: f64) -> f64 {
        match *self {
            Decay::Algebraic { p } => -p * w.ln(),
            Decay::PolyExp { d, lambda } => d * ln_pos(w) - lambda * w,
            Decay::SuperExp { b } => -w.exp() + b * w,
        }
    }

    /// Upper bound on `ln ∫_w^∞ value`.
    fn ln_tail(&self, w: f64) -> f64 {
        match *self {
            Decay::Algebraic { p } if p > 1.0 => (1.0 - p) * w.ln() - (p - 1.0).ln(),
            Decay::Algebraic { .. } => f64::INFINITY,
            Decay::PolyExp { d, lambda } => LN_2 + d * ln_pos(w) - lambda * w - lambda.ln(),
            // ∫_{e^w}^∞ e^{-s} s^{b-1} ds <= 2 (e^w)^{b-1} e^{-e^w}.
            Decay::SuperExp { b } => LN_2 + (b - 1.0) * w - w.exp(),
        }
    }

    /// Upper bound on `ln ∫_w^∞ s * value(s) ds`.
    fn ln_moment(&self, w: f64) -> f64 {
        match *self {
            Decay::Algebraic { p } if p > 2.0 => (2.0 - p) * w.ln() - (p - 2.0).ln(),
            Decay::Algebraic { .. } => f64::INFINITY,
            Decay::PolyExp { d, lambda } => LN_2 + (d + 1.0) * ln_pos(w) - lambda * w - lambda.ln(),
            // s <= e^s, then as for the tail with b + 1.
            Decay::SuperExp { b } => LN_2 + b * w - w.exp(),
        }
    }

    fn reweight(&self, delta: f64) -> Option<Decay> {
        match *self {
            Decay::Algebraic { .. } if delta <= 0.0 => Some(*self),
            Decay::Algebraic { .. } => None,
            Decay::PolyExp { d, lambda } if lambda - delta > 0.0 => Some(Decay::PolyExp {
                d,
                lambda: lambda - delta,
            }),
            Decay::PolyExp { .. } => None,
            Decay::SuperExp { b } => Some(Decay::SuperExp { b: b + delta }),
        }
    }

    pub fn is_exponential(&self) -> bool {
        !matches!(self, Decay::Algebraic { .. })
    }
}

fn ln_pos(w: f64) -> f64 {
    if w > 0.0 {
        w.ln()
    } else {
        f64::NEG_INFINITY
    }
}

fn log_add(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let m = a.max(b);
    if m == f64::INFINITY {
        return m;
    }
    m + ((a - m).exp() + (b - m).exp()).ln()
}

/// `exp(ln_coeff) * decay(u + shift)`, valid for `u >= start`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Term {
    pub ln_coeff: f64,
    pub decay: Decay,
    pub shift: f64,
    pub start: f64,
}

impl Term {
    pub fn new(coeff: f64, decay: Decay) -> Self {
        Term {
            ln_coeff: coeff.ln(),
            decay,
            shift: 0.0,
            start: 0.0,
        }
    }

    pub fn starting_at(mut self, start: f64) -> Self {
        self.start = start;
        self
    }

    fn valid_from(&self) -> f64 {
        self.start.max(self.decay.threshold() - self.shift).max(0.0)
    }
}

/// One side of an envelope: a finite sum of terms.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Side {
    pub terms: Vec<Term>,
}

impl Side {
    pub fn single(term: Term) -> Self {
        Side { terms: vec![term] }
    }

    /// Distance from which every term's bounds hold.
    pub fn valid_from(&self) -> f64 {
        self.terms.iter().map(Term::valid_from).fold(0.0, f64::max)
    }

    pub fn is_exponential(&self) -> bool {
        self.terms.iter().all(|t| t.decay.is_exponential())
    }

    /// Smallest algebraic power among the terms, if any term is algebraic.
    pub fn algebraic_power(&self) -> Option<f64> {
        self.terms
            .iter()
            .filter_map(|t| match t.decay {
                Decay::Algebraic { p } => Some(p),
                _ => None,
            })
            .reduce(f64::min)
    }

    fn fold(&self, u: f64, g: impl Fn(&Decay, f64) -> f64) -> f64 {
        self.terms
            .iter()
            .map(|t| t.ln_coeff + g(&t.decay, u + t.shift))
            .fold(f64::NEG_INFINITY, log_add)
    }

    pub fn ln_value(&self, u: f64) -> f64 {
        self.fold(u, Decay::ln_value)
    }

    pub fn ln_tail(&self, u: f64) -> f64 {
        self.fold(u, Decay::ln_tail)
    }

    /// Moment about the origin of the `u` axis; shifts are absorbed by
    /// `u <= u + |shift|` and the tail bound.
    pub fn ln_moment(&self, u: f64) -> f64 {
        self.terms
            .iter()
            .map(|t| {
                let w = u + t.shift;
                let m = t.ln_coeff + t.decay.ln_moment(w);
                if t.shift >= 0.0 {
                    m
                } else {
                    log_add(m, t.ln_coeff + (-t.shift).ln() + t.decay.ln_tail(w))
                }
            })
            .fold(f64::NEG_INFINITY, log_add)
    }

    /// Bound on `h * sum_{j >= 0} value(u + j h)` for a decreasing envelope.
    pub fn ln_lattice_tail(&self, u: f64, h: f64) -> f64 {
        log_add(h.ln() + self.ln_value(u), self.ln_tail(u))
    }

    /// Smallest `u >= valid_from` (to a relative resolution of 1e-6) where
    /// the lattice tail with step `h` drops below `exp(ln_target)`.
    pub fn cut(&self, h: f64, ln_target: f64) -> Option<f64> {
        let lo0 = self.valid_from();
        let ok = |u: f64| self.ln_lattice_tail(u, h) <= ln_target;
        if ok(lo0) {
            return Some(lo0);
        }
        let mut hi = lo0.max(1.0);
        let mut steps = 0;
        while !ok(hi) {
            hi *= 2.0;
            steps += 1;
            if steps > 80 || !self.ln_tail(hi).is_finite() {
                return None;
            }
        }
        let mut lo = lo0;
        while hi - lo > 1e-6 * hi.max(1.0) {
            let mid = 0.5 * (lo + hi);
            if ok(mid) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Some(hi)
    }

    /// Multiply by `e^{delta u}`.
    pub fn reweight(&self, delta: f64) -> Option<Side> {
        let terms = self
            .terms
            .iter()
            .map(|t| {
                t.decay.reweight(delta).map(|decay| Term {
                    ln_coeff: t.ln_coeff - delta * t.shift,
                    decay,
                    ..*t
                })
            })
            .collect::<Option<Vec<_>>>()?;
        Some(Side { terms })
    }

    /// Replace `u` by `u + s`.
    pub fn shifted(&self, s: f64) -> Side {
        let terms = self
            .terms
            .iter()
            .map(|t| Term {
                shift: t.shift + s,
                start: (t.start - s).max(0.0),
                ..*t
            })
            .collect();
        Side { terms }
    }

    pub fn scaled(&self, k: f64) -> Side {
        let lk = k.ln();
        let terms = self
            .terms
            .iter()
            .map(|t| Term {
                ln_coeff: t.ln_coeff + lk,
                ..*t
            })
            .collect();
        Side { terms }
    }

    pub fn plus(&self, other: &Side) -> Side {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().copied());
        Side { terms }
    }
}

/// Bound on `|f(e^x)| e^{cx}` for one abscissa `c`.
#[derive(Clone, Debug, PartialEq)]
pub struct Envelope {
    pub right: Side,
    pub left: Side,
}

impl Envelope {
    pub fn symmetric(side: Side) -> Self {
        Envelope {
            right: side.clone(),
            left: side,
        }
    }

    /// Envelope for abscissa `c + delta`.
    pub fn reweight(&self, delta: f64) -> Option<Envelope> {
        Some(Envelope {
            right: self.right.reweight(delta)?,
            left: self.left.reweight(-delta)?,
        })
    }

    /// Envelope of `x -> F(x + s)` where `F` is bounded by `self`.
    pub fn translated(&self, s: f64) -> Envelope {
        Envelope {
            right: self.right.shifted(s),
            left: self.left.shifted(-s),
        }
    }

    pub fn scaled(&self, k: f64) -> Envelope {
        Envelope {
            right: self.right.scaled(k),
            left: self.left.scaled(k),
        }
    }

    /// Envelope of `x -> F(-x)`.
    pub fn mirrored(&self) -> Envelope {
        Envelope {
            right: self.left.clone(),
            left: self.right.clone(),
        }
    }

    pub fn plus(&self, other: &Envelope) -> Envelope {
        Envelope {
            right: self.right.plus(&other.right),
            left: self.left.plus(&other.left),
        }
    }
}
