//! Regression objectives on ray vectors.
//!
//! All functions treat rays below `ε = 1e-6` as `ε`.

use crate::error::{Error, Result};
use crate::scalar::{lit, Scalar};

/// Smooth-L1 transition point used when none is given, in pixels.
pub const DEFAULT_SMOOTH_L1_BETA: f64 = 1.0;

/// Balance factors compared against the Polar IoU loss.
pub const SMOOTH_L1_ALPHAS: [f64; 3] = [0.05, 0.30, 1.00];

/// Target and predicted ray lengths of one instance.
#[derive(Debug, Clone, PartialEq)]
pub struct RayPair<T> {
    target: Vec<T>,
    predicted: Vec<T>,
}

impl<T: Scalar> RayPair<T> {
    pub fn new(target: Vec<T>, predicted: Vec<T>) -> Result<Self> {
        if target.len() != predicted.len() {
            return Err(Error::InvalidRayPair(format!(
                "length mismatch: {} target vs {} predicted",
                target.len(),
                predicted.len()
            )));
        }
        if target.len() < 4 {
            return Err(Error::InvalidRayPair(format!(
                "{} rays, need at least 4",
                target.len()
            )));
        }
        let bad = |v: &[T]| v.iter().any(|r| !r.is_finite() || *r <= T::zero());
        if bad(&target) || bad(&predicted) {
            return Err(Error::InvalidRayPair("rays must be finite and > 0".into()));
        }
        let eps = T::ray_epsilon();
        let clamp = |v: Vec<T>| v.into_iter().map(|r| r.max(eps)).collect();
        Ok(Self {
            target: clamp(target),
            predicted: clamp(predicted),
        })
    }

    pub fn target(&self) -> &[T] {
        &self.target
    }

    pub fn predicted(&self) -> &[T] {
        &self.predicted
    }

    pub fn len(&self) -> usize {
        self.target.len()
    }

    pub fn is_empty(&self) -> bool {
        self.target.is_empty()
    }
}

/// Loss value with its gradient with respect to the predicted rays.
#[derive(Debug, Clone, PartialEq)]
pub struct LossValueGrad<T> {
    pub value: T,
    pub grad: Vec<T>,
}

fn min_max_sums<T: Scalar>(rp: &RayPair<T>) -> (T, T) {
    rp.target
        .iter()
        .zip(&rp.predicted)
        .fold((T::zero(), T::zero()), |(lo, hi), (&d, &p)| {
            (lo + d.min(p), hi + d.max(p))
        })
}

/// `Σ min(d, d*) / Σ max(d, d*)`.
pub fn polar_iou<T: Scalar>(rp: &RayPair<T>) -> T {
    let (lo, hi) = min_max_sums(rp);
    lo / hi
}

/// `log(Σ max / Σ min)` and its subgradient.
///
/// `∂/∂d*_i` is `1/Σmax` where the prediction exceeds the target and
/// `-1/Σmin` where it falls short. At a tie the max-branch term `1/Σmax` is
/// used.
pub fn polar_iou_loss<T: Scalar>(rp: &RayPair<T>) -> LossValueGrad<T> {
    let (lo, hi) = min_max_sums(rp);
    let up = hi.recip();
    let down = -lo.recip();
    let grad = rp
        .target
        .iter()
        .zip(&rp.predicted)
        .map(|(&d, &p)| if p >= d { up } else { down })
        .collect();
    LossValueGrad {
        value: (hi / lo).ln(),
        grad,
    }
}

/// `Σ min(d, d*)² / Σ max(d, d*)²`: the polar-integral mask IoU of two
/// star-convex shapes sampled at uniform angles.
pub fn squared_polar_iou<T: Scalar>(rp: &RayPair<T>) -> T {
    let (lo, hi) =
        rp.target
            .iter()
            .zip(&rp.predicted)
            .fold((T::zero(), T::zero()), |(lo, hi), (&d, &p)| {
                let (a, b) = (d.min(p), d.max(p));
                (lo + a * a, hi + b * b)
            });
    lo / hi
}

/// `alpha · Σ sl1(d*_i − d_i)` with `sl1(r) = r²/(2β)` for `|r| < β`, else
/// `|r| − β/2`.
pub fn smooth_l1_loss<T: Scalar>(rp: &RayPair<T>, beta: T, alpha: T) -> Result<LossValueGrad<T>> {
    if !beta.is_finite() || !alpha.is_finite() || beta <= T::zero() || alpha <= T::zero() {
        return Err(Error::InvalidArgument(format!(
            "smooth-L1 needs beta > 0 and alpha > 0, got beta={beta}, alpha={alpha}"
        )));
    }
    let half = lit::<T>(0.5);
    let mut value = T::zero();
    let grad = rp
        .target
        .iter()
        .zip(&rp.predicted)
        .map(|(&d, &p)| {
            let r = p - d;
            if r.abs() < beta {
                value = value + half * r * r / beta;
                alpha * r / beta
            } else {
                value = value + r.abs() - half * beta;
                alpha * r.signum()
            }
        })
        .collect();
    Ok(LossValueGrad {
        value: alpha * value,
        grad,
    })
}

/// Objective minimised by [`descend`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Objective {
    PolarIou,
    SmoothL1 { beta: f64, alpha: f64 },
}

impl Objective {
    pub fn evaluate<T: Scalar>(&self, rp: &RayPair<T>) -> Result<LossValueGrad<T>> {
        match *self {
            Objective::PolarIou => Ok(polar_iou_loss(rp)),
            Objective::SmoothL1 { beta, alpha } => smooth_l1_loss(rp, lit(beta), lit(alpha)),
        }
    }

    /// Short label, e.g. `polar_iou` or `smooth_l1_a0.30`.
    pub fn label(&self) -> String {
        match self {
            Objective::PolarIou => "polar_iou".to_string(),
            Objective::SmoothL1 { alpha, .. } => format!("smooth_l1_a{alpha:.2}"),
        }
    }
}

/// State after each step of [`descend`]; index 0 is the starting point.
#[derive(Debug, Clone, PartialEq)]
pub struct DescentStep<T> {
    pub loss: T,
    pub polar_iou: T,
}

/// Fixed-step gradient descent on the predicted rays, `d* ← max(ε, d* − lr·∇)`.
///
/// Returns `steps + 1` records and the final prediction.
pub fn descend<T: Scalar>(
    target: &[T],
    start: &[T],
    objective: Objective,
    lr: T,
    steps: usize,
) -> Result<(Vec<DescentStep<T>>, Vec<T>)> {
    if !lr.is_finite() || lr < T::zero() {
        return Err(Error::InvalidArgument(format!(
            "step size must be >= 0, got {lr}"
        )));
    }
    let eps = T::ray_epsilon();
    let mut rp = RayPair::new(target.to_vec(), start.to_vec())?;
    let mut trace = Vec::with_capacity(steps + 1);
    for step in 0..=steps {
        let eval = objective.evaluate(&rp)?;
        trace.push(DescentStep {
            loss: eval.value,
            polar_iou: polar_iou(&rp),
        });
        if step == steps {
            break;
        }
        for (p, g) in rp.predicted.iter_mut().zip(&eval.grad) {
            *p = (*p - lr * *g).max(eps);
        }
    }
    Ok((trace, rp.predicted))
}
