use super::BoundsError;

/// Inputs of the constant table: drift constants, noise moments and the
/// power-law schedule `alpha_t = a / (u + t)^gamma`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundPrimitives {
    pub kappa: f64,
    pub lambda: f64,
    /// Level above which the drift condition holds, in units of `alpha_t`.
    pub b: f64,
    /// Range `max f - min f` of the Lyapunov function on the feasible set.
    pub f: f64,
    /// `E[exp(lambda Z)]`.
    pub d: f64,
    /// `E[(exp(lambda Z) - 1 - lambda Z) / lambda^2]`.
    pub e: f64,
    pub gamma: f64,
    pub a: f64,
    pub u: f64,
}

/// Full constant table. Every derived field is a closed-form function of the
/// primitives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundConstants {
    pub kappa: f64,
    pub lambda: f64,
    pub b: f64,
    pub f: f64,
    pub d: f64,
    pub e: f64,
    pub gamma: f64,
    pub a: f64,
    pub u: f64,
    /// `4^-gamma`
    pub g: f64,
    pub n: u32,
    /// `min(lambda, kappa / 2E)`
    pub q: f64,
    pub h: f64,
    pub i: f64,
    /// Tail exponent `Q G^n`.
    pub j: f64,
    /// Mean-gap constant `I / J`.
    pub k: f64,
    /// Constant of the staged (linear convergence) bound.
    pub r: f64,
    pub t0: u64,
    pub t1: f64,
    pub t2: f64,
}

impl BoundConstants {
    pub fn alpha(&self, t: f64) -> f64 {
        self.a / (self.u + t).powf(self.gamma)
    }

    pub fn alpha0(&self) -> f64 {
        self.alpha(0.0)
    }
}

fn decrement(u: f64, gamma: f64, s: f64) -> f64 {
    // (alpha_s - alpha_{s+1}) / alpha_s
    -(gamma * ((u + s) / (u + s + 1.0)).ln()).exp_m1()
}

/// Smallest `t` with `(alpha_s - alpha_{s+1}) / alpha_s < kappa / (2B)` for
/// every `s >= t`. The relative decrement of a power law is decreasing in
/// `s`, so this is the first crossing.
pub fn first_stable_time(u: f64, gamma: f64, kappa: f64, b: f64) -> u64 {
    let thr = kappa / (2.0 * b);
    if gamma == 0.0 || thr >= 1.0 {
        return 0;
    }
    let q = (1.0 - thr).powf(1.0 / gamma);
    let guess = (q / (1.0 - q) - u).floor() + 1.0;
    let mut t = if guess > 0.0 { guess as u64 } else { 0 };
    while t > 0 && decrement(u, gamma, (t - 1) as f64) < thr {
        t -= 1;
    }
    while decrement(u, gamma, t as f64) >= thr {
        t += 1;
    }
    t
}

fn positive(name: &'static str, value: f64) -> Result<(), BoundsError> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(BoundsError::OutOfRange { name, value, reason: "must be positive and finite" })
    }
}

/// Evaluates the constant table from its primitives.
pub fn bound_constants(p: &BoundPrimitives) -> Result<BoundConstants, BoundsError> {
    for (name, v) in [
        ("kappa", p.kappa),
        ("lambda", p.lambda),
        ("B", p.b),
        ("F", p.f),
        ("D", p.d),
        ("E", p.e),
        ("a", p.a),
        ("u", p.u),
    ] {
        positive(name, v)?;
    }
    if !(0.0..=1.0).contains(&p.gamma) {
        return Err(BoundsError::OutOfRange { name: "gamma", value: p.gamma, reason: "must lie in [0, 1]" });
    }

    let alpha0 = p.a / p.u.powf(p.gamma);
    let g = 0.25f64.powf(p.gamma);
    let reach = alpha0 * p.b + p.f;
    let (n, t1) = if p.gamma < 1.0 {
        (1u32, p.u + 2f64.powf(1.0 + p.gamma) * reach / (p.a * p.u.powf(-p.gamma)))
    } else {
        let m = (reach / (p.a * std::f64::consts::LN_2)).ceil();
        if m > 1000.0 {
            return Err(BoundsError::InvalidRegime(format!(
                "n = {} is too large for G^n to be representable",
                m + 1.0
            )));
        }
        let n = 1 + m as u32;
        (n, p.u * 2f64.powi(n as i32))
    };
    let t0 = first_stable_time(p.u, p.gamma, p.kappa, p.b);
    let t2 = (t0 as f64).max(t1);
    let alpha_t2 = p.a / (p.u + t2).powf(p.gamma);
    let slack = p.f / alpha_t2 - p.b;
    if !(slack > 0.0) {
        return Err(BoundsError::InvalidRegime(format!(
            "B = {} must be below F / alpha_T2 = {}",
            p.b,
            p.f / alpha_t2
        )));
    }

    let q = p.lambda.min(p.kappa / (2.0 * p.e));
    let gn = g.powi(n as i32);
    let j = q * gn;
    let x = p.kappa * q * gn / 2.0;
    let h = p.d * x.exp() / (1.0 - (-x).exp());
    let i = (1.0 + h) * (q * g / slack).exp();
    let k = i / j;
    let y = q * p.kappa / 2.0;
    let r = 1.0 + p.d * y.exp() * (q * p.b).exp() / (1.0 - (-y).exp());
    if !(j > 0.0 && k.is_finite() && h.is_finite() && r.is_finite()) {
        return Err(BoundsError::InvalidRegime("constants overflow".into()));
    }

    Ok(BoundConstants {
        kappa: p.kappa,
        lambda: p.lambda,
        b: p.b,
        f: p.f,
        d: p.d,
        e: p.e,
        gamma: p.gamma,
        a: p.a,
        u: p.u,
        g,
        n,
        q,
        h,
        i,
        j,
        k,
        r,
        t0,
        t1,
        t2,
    })
}

/// `min(1, I exp(-(J / alpha_t) z))`; negative `z` gives the trivial bound 1.
pub fn tail_bound(bc: &BoundConstants, alpha_t: f64, z: f64) -> f64 {
    if z < 0.0 {
        return 1.0;
    }
    (bc.i * (-(bc.j / alpha_t) * z).exp()).min(1.0)
}
