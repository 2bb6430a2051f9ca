//! The Hankel-contour integral of [`super::contour`] evaluated in 128-bit
//! MPFR arithmetic. Used only when the double-precision integral loses too
//! much to cancellation, typically for `α` near one with the pole of the
//! integrand close to the branch cut.

use num_complex::Complex64;
use rug::float::Constant;
use rug::Float;
use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::contour::{ContourValue, DECAY};

const PREC: u32 = 128;
const MAX_EVALS: usize = 60_000;

const XGK: [&str; 8] = [
    "0.991455371120812639206854697526329",
    "0.949107912342758524526189684047851",
    "0.864864423359769072789712788640926",
    "0.741531185599394439863864773280788",
    "0.586087235467691130294144845693013",
    "0.405845151377397166906606412076961",
    "0.207784955007898467600689403773245",
    "0.0",
];
const WGK: [&str; 8] = [
    "0.022935322010529224963732008058970",
    "0.063092092629978553290700663189204",
    "0.104790010322250183839876322541518",
    "0.140653259715525918745189590510238",
    "0.169004726639267902826583426598550",
    "0.190350578064785409913256402421014",
    "0.204432940075298892414161999234649",
    "0.209482141084727828012999174891714",
];
const WG: [&str; 4] = [
    "0.129484966168869693270611432679082",
    "0.279705391489276667901467771423780",
    "0.381830050505118944950369775488975",
    "0.417959183673469387755102040816327",
];

fn parse(s: &str) -> Float {
    Float::with_val(PREC, Float::parse(s).expect("valid literal"))
}

fn f(v: f64) -> Float {
    Float::with_val(PREC, v)
}

#[derive(Clone)]
struct Cx {
    re: Float,
    im: Float,
}

impl Cx {
    fn new(re: Float, im: Float) -> Self {
        Self { re, im }
    }
    fn polar(theta: &Float) -> Self {
        let (s, c) = theta.clone().sin_cos(Float::new(PREC));
        Self::new(c, s)
    }
    fn add(&self, o: &Cx) -> Cx {
        Cx::new(Float::with_val(PREC, &self.re + &o.re), Float::with_val(PREC, &self.im + &o.im))
    }
    fn sub(&self, o: &Cx) -> Cx {
        Cx::new(Float::with_val(PREC, &self.re - &o.re), Float::with_val(PREC, &self.im - &o.im))
    }
    fn scale(&self, s: &Float) -> Cx {
        Cx::new(Float::with_val(PREC, &self.re * s), Float::with_val(PREC, &self.im * s))
    }
    fn mul(&self, o: &Cx) -> Cx {
        let re = Float::with_val(PREC, &self.re * &o.re) - Float::with_val(PREC, &self.im * &o.im);
        let im = Float::with_val(PREC, &self.re * &o.im) + Float::with_val(PREC, &self.im * &o.re);
        Cx::new(re, im)
    }
    fn ln(&self) -> Cx {
        let m = self.re.clone().hypot(&self.im).ln();
        let a = self.im.clone().atan2(&self.re);
        Cx::new(m, a)
    }
    fn exp(&self) -> Cx {
        let m = self.re.clone().exp();
        let (s, c) = self.im.clone().sin_cos(Float::new(PREC));
        Cx::new(c * &m, s * m)
    }
    fn norm(&self) -> f64 {
        self.re.clone().hypot(&self.im).to_f64()
    }
    fn to_c64(&self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }
}

struct Panel {
    a: Float,
    b: Float,
    value: Cx,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, o: &Self) -> bool {
        self.error == o.error
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Panel {
    fn cmp(&self, o: &Self) -> Ordering {
        self.error.total_cmp(&o.error)
    }
}

struct Rule {
    xgk: Vec<Float>,
    wgk: Vec<Float>,
    wg: Vec<Float>,
}

impl Rule {
    fn new() -> Self {
        Self {
            xgk: XGK.iter().map(|s| parse(s)).collect(),
            wgk: WGK.iter().map(|s| parse(s)).collect(),
            wg: WG.iter().map(|s| parse(s)).collect(),
        }
    }

    fn panel<F: FnMut(&Float) -> Cx>(&self, g: &mut F, a: Float, b: Float) -> Panel {
        let center = Float::with_val(PREC, &a + &b) / 2u32;
        let half = Float::with_val(PREC, &b - &a) / 2u32;
        let fc = g(&center);
        let mut kron = fc.scale(&self.wgk[7]);
        let mut gauss = fc.scale(&self.wg[3]);
        let mut abs_k = fc.norm() * self.wgk[7].to_f64();
        for j in 0..7 {
            let dx = Float::with_val(PREC, &half * &self.xgk[j]);
            let f1 = g(&Float::with_val(PREC, &center - &dx));
            let f2 = g(&Float::with_val(PREC, &center + &dx));
            abs_k += (f1.norm() + f2.norm()) * self.wgk[j].to_f64();
            let sum = f1.add(&f2);
            kron = kron.add(&sum.scale(&self.wgk[j]));
            if j % 2 == 1 {
                gauss = gauss.add(&sum.scale(&self.wg[j / 2]));
            }
        }
        let h = half.to_f64().abs();
        let diff = kron.sub(&gauss).norm() * h;
        let abs_integral = abs_k * h;
        let error = if diff == 0.0 {
            0.0
        } else {
            let scaled = (200.0 * diff / abs_integral.max(f64::MIN_POSITIVE)).powf(1.5);
            (abs_integral * scaled.min(1.0)).max(diff.min(abs_integral))
        };
        Panel { a, b, value: kron.scale(&half), error }
    }
}

/// Adaptive integration; returns (value, error estimate).
fn integrate<F: FnMut(&Float) -> Cx>(mut g: F, points: &[f64], rel_tol: f64, abs_tol: f64) -> (Cx, f64) {
    let rule = Rule::new();
    let mut heap = BinaryHeap::new();
    let mut evals = 0;
    for w in points.windows(2) {
        heap.push(rule.panel(&mut g, f(w[0]), f(w[1])));
        evals += 15;
    }
    loop {
        let mut value = Cx::new(f(0.0), f(0.0));
        let mut err = 0.0;
        for p in heap.iter() {
            value = value.add(&p.value);
            err += p.error;
        }
        if err <= abs_tol.max(rel_tol * value.norm()) || evals + 30 > MAX_EVALS {
            return (value, err);
        }
        let worst = heap.pop().expect("non-empty");
        let mid = Float::with_val(PREC, &worst.a + &worst.b) / 2u32;
        heap.push(rule.panel(&mut g, worst.a, mid.clone()));
        heap.push(rule.panel(&mut g, mid, worst.b));
        evals += 30;
    }
}

/// Same contract as [`super::contour::hankel`].
pub(crate) fn hankel(
    alpha: f64,
    n: u32,
    z: Complex64,
    ln_pref: f64,
    theta: f64,
    rel_tol: f64,
    abs_tol: f64,
) -> ContourValue {
    let pi = Float::with_val(PREC, Constant::Pi);
    // θ is a rational multiple of π chosen in double precision; rebuild it
    // from that ratio so the rays are exact to working precision.
    let theta_mp = Float::with_val(PREC, &pi * (theta / std::f64::consts::PI));
    let alpha_mp = f(alpha);
    let inv_alpha = Float::with_val(PREC, 1u32) / &alpha_mp;
    let np1 = f(f64::from(n) + 1.0);
    let zc = Cx::new(f(z.re), f(z.im));
    let pref = f(ln_pref);

    let u_max = (DECAY / theta.cos().abs()).powf(alpha);
    let mut points: Vec<f64> = (1..16).map(|j| (f64::from(j) / 16.0).powf(alpha) * u_max).collect();
    points.push(z.norm());
    points.retain(|&p| p > 0.0 && p < u_max);
    points.push(0.0);
    points.push(u_max);
    points.sort_by(f64::total_cmp);
    points.dedup();

    let ray = |sign: f64, rel_q: f64| {
        let th = Float::with_val(PREC, &theta_mp * sign);
        let rot = Cx::polar(&th);
        let rot_a = Cx::polar(&Float::with_val(PREC, &th * &alpha_mp));
        let rot_a_scaled = rot_a.scale(&inv_alpha);
        let g = |u: &Float| {
            let r = (Float::with_val(PREC, u.ln_ref()) * &inv_alpha).exp();
            let w = rot_a.scale(u).sub(&zc);
            let lw = w.ln().scale(&np1);
            let mut expo = rot.scale(&r).sub(&lw);
            expo.re += &pref;
            expo.exp().mul(&rot_a_scaled)
        };
        integrate(g, &points, rel_q, 0.05 * abs_tol)
    };

    let two_pi = Float::with_val(PREC, &pi * 2u32);
    let pass = |rel_q: f64| {
        if z.im == 0.0 {
            let (v, e) = ray(1.0, rel_q);
            let mag = v.norm() / std::f64::consts::PI;
            (Cx::new(v.im / &pi, f(0.0)), e / std::f64::consts::PI, mag)
        } else {
            let (vp, ep) = ray(1.0, rel_q);
            let (vm, em) = ray(-1.0, rel_q);
            let d = vp.sub(&vm);
            // d / (2πi) = (d.im, -d.re) / 2π
            let v = Cx::new(Float::with_val(PREC, &d.im / &two_pi), -d.re / &two_pi);
            let mag = vp.norm().max(vm.norm()) / (2.0 * std::f64::consts::PI);
            (v, (ep + em) / (2.0 * std::f64::consts::PI), mag)
        }
    };

    let residue = if z.arg().abs() < alpha * theta {
        let mut w = zc.ln().scale(&inv_alpha).exp();
        w.re += &pref;
        w.exp().scale(&inv_alpha)
    } else {
        Cx::new(f(0.0), f(0.0))
    };

    let (mut value, mut abs_err, mag) = pass(0.05 * rel_tol);
    value = value.add(&residue);
    let norm = value.norm();
    if abs_err > abs_tol.max(rel_tol * norm) && mag > norm && rel_tol > 0.0 {
        let (v2, e2, _) = pass(0.05 * rel_tol * (norm / mag).max(1e-20));
        value = v2.add(&residue);
        abs_err = e2;
    }
    ContourValue { value: value.to_c64(), abs_err }
}
