use serde::Serialize;

use super::Transcription;

/// Left and right ends of the curve domain.
pub const DOMAIN: (f64, f64) = (1.0, 3.0);

/// `f(x) = a·x² + b·x + c` on `[1, 3]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PitchCurve {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl PitchCurve {
    /// Interpolating curve for a transcription: the line through the end
    /// digits placed at x = 1 and x = 3, or the parabola that also passes
    /// through the middle digit at x = 2.
    pub fn of(t: &Transcription) -> Self {
        match *t.digits() {
            [p, q] => {
                let (p, q) = (f64::from(p), f64::from(q));
                let slope = (q - p) / 2.0;
                PitchCurve {
                    a: 0.0,
                    b: slope,
                    c: p - slope,
                }
            }
            [p, q, r] => {
                let (p, q, r) = (f64::from(p), f64::from(q), f64::from(r));
                let a = (p - 2.0 * q + r) / 2.0;
                let b = (q - p) - 3.0 * a;
                PitchCurve { a, b, c: p - a - b }
            }
            _ => unreachable!("transcriptions have 2 or 3 digits"),
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        (self.a * x + self.b) * x + self.c
    }

    fn antiderivative(&self, x: f64) -> f64 {
        ((self.a / 3.0 * x + self.b / 2.0) * x + self.c) * x
    }

    fn minus(&self, other: &PitchCurve) -> PitchCurve {
        PitchCurve {
            a: self.a - other.a,
            b: self.b - other.b,
            c: self.c - other.c,
        }
    }

    /// Real roots strictly inside `(lo, hi)`, ascending. Double roots are
    /// skipped since the sign does not change there.
    fn sign_changes(&self, lo: f64, hi: f64) -> Vec<f64> {
        // f and -f share roots; fixing the sign makes the result independent
        // of argument order down to the last bit.
        let (a, b, c) = if self.a < 0.0 || (self.a == 0.0 && self.b < 0.0) {
            (-self.a, -self.b, -self.c)
        } else {
            (self.a, self.b, self.c)
        };
        let mut roots = Vec::with_capacity(2);
        if a != 0.0 {
            let disc = b * b - 4.0 * a * c;
            if disc > 0.0 {
                let q = -0.5 * (b + if b >= 0.0 { disc.sqrt() } else { -disc.sqrt() });
                roots.push(q / a);
                if q != 0.0 {
                    roots.push(c / q);
                }
            }
        } else if b != 0.0 {
            roots.push(-c / b);
        }
        roots.retain(|&r| r > lo && r < hi);
        roots.sort_by(f64::total_cmp);
        roots
    }

    /// `∫ |f(x)| dx` over `[lo, hi]`, integrated piecewise between sign changes.
    pub fn abs_integral(&self, lo: f64, hi: f64) -> f64 {
        let mut knots = vec![lo];
        knots.extend(self.sign_changes(lo, hi));
        knots.push(hi);
        knots
            .windows(2)
            .map(|w| (self.antiderivative(w[1]) - self.antiderivative(w[0])).abs())
            .sum()
    }
}

/// Area between the pitch curves of two transcriptions over `[1, 3]`.
pub fn tone_distance(l1: &Transcription, l2: &Transcription) -> f64 {
    PitchCurve::of(l1)
        .minus(&PitchCurve::of(l2))
        .abs_integral(DOMAIN.0, DOMAIN.1)
}
