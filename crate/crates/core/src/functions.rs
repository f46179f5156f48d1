//! Piecewise-linear functions with shape certificates.
//!
//! Every profit, transfer-cost and risk curve in a scenario is a
//! [`PwlFunction`]: a list of breakpoints plus two extension slopes that
//! continue the function linearly past the first and last breakpoint. The
//! LP compiler never evaluates these curves directly; it asks for their
//! supporting lines ([`PwlFunction::cuts`]) and encodes concave terms by a
//! hypograph and convex terms by an epigraph.

use alloc::vec::Vec;

/// Absolute tolerance used when comparing successive slopes.
pub const SLOPE_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum FunctionError {
    #[error("a piecewise-linear function needs at least one breakpoint")]
    NoBreakpoints,
    #[error("breakpoint arguments must be strictly increasing (breakpoint {0})")]
    NotIncreasing(usize),
    #[error("non-finite breakpoint or slope (breakpoint {0})")]
    NonFinite(usize),
    #[error("function is neither convex nor concave")]
    NeitherConvexNorConcave,
}

/// Shape requirements a function can be checked against.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Shape {
    pub convex: bool,
    pub concave: bool,
    pub nondecreasing: bool,
}

impl Shape {
    pub const NONE: Shape = Shape {
        convex: false,
        concave: false,
        nondecreasing: false,
    };
    pub const CONVEX: Shape = Shape {
        convex: true,
        concave: false,
        nondecreasing: false,
    };
    pub const CONCAVE: Shape = Shape {
        convex: false,
        concave: true,
        nondecreasing: false,
    };
    pub const NONDECREASING: Shape = Shape {
        convex: false,
        concave: false,
        nondecreasing: true,
    };
    /// Required of transfer costs and risks.
    pub const CONVEX_NONDECREASING: Shape = Shape {
        convex: true,
        concave: false,
        nondecreasing: true,
    };
    /// Required of release profits.
    pub const CONCAVE_NONDECREASING: Shape = Shape {
        convex: false,
        concave: true,
        nondecreasing: true,
    };

    pub fn union(self, other: Shape) -> Shape {
        Shape {
            convex: self.convex || other.convex,
            concave: self.concave || other.concave,
            nondecreasing: self.nondecreasing || other.nondecreasing,
        }
    }

    /// True when every flag set in `other` is also set in `self`.
    pub fn contains(self, other: Shape) -> bool {
        (self.convex || !other.convex)
            && (self.concave || !other.concave)
            && (self.nondecreasing || !other.nondecreasing)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShapeProperty {
    Convex,
    Concave,
    Nondecreasing,
}

impl core::fmt::Display for ShapeProperty {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(match self {
            ShapeProperty::Convex => "convex",
            ShapeProperty::Concave => "concave",
            ShapeProperty::Nondecreasing => "nondecreasing",
        })
    }
}

/// First place where a function fails a required shape flag.
///
/// `segment` indexes the slope sequence returned by [`PwlFunction::slopes`],
/// i.e. 0 is the left extension.
#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("function is not {property} (segment {segment})")]
pub struct ShapeViolation {
    pub property: ShapeProperty,
    pub segment: usize,
}

/// A supporting line `slope * x + intercept`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cut {
    pub slope: f64,
    pub intercept: f64,
}

impl Cut {
    #[inline]
    pub fn eval(&self, x: f64) -> f64 {
        self.slope * x + self.intercept
    }
}

/// Continuous piecewise-linear function on the whole real line.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PwlFunction {
    breakpoints: Vec<(f64, f64)>,
    left_slope: f64,
    right_slope: f64,
}

impl PwlFunction {
    pub fn new(
        breakpoints: Vec<(f64, f64)>,
        left_slope: f64,
        right_slope: f64,
    ) -> Result<Self, FunctionError> {
        if breakpoints.is_empty() {
            return Err(FunctionError::NoBreakpoints);
        }
        for (i, &(x, y)) in breakpoints.iter().enumerate() {
            if !x.is_finite() || !y.is_finite() {
                return Err(FunctionError::NonFinite(i));
            }
            if i > 0 && x <= breakpoints[i - 1].0 {
                return Err(FunctionError::NotIncreasing(i));
            }
        }
        if !left_slope.is_finite() || !right_slope.is_finite() {
            return Err(FunctionError::NonFinite(0));
        }
        Ok(Self {
            breakpoints,
            left_slope,
            right_slope,
        })
    }

    /// `f(x) = slope * x`.
    pub fn linear(slope: f64) -> Self {
        Self {
            breakpoints: alloc::vec![(0.0, 0.0)],
            left_slope: slope,
            right_slope: slope,
        }
    }

    /// Profit that grows with `slope` up to the demand cap and stays flat after.
    pub fn capped_linear(slope: f64, cap: f64) -> Self {
        Self {
            breakpoints: alloc::vec![(0.0, 0.0), (cap, slope * cap)],
            left_slope: slope,
            right_slope: 0.0,
        }
    }

    /// Zero on nonpositive arguments, `slope * x` on positive ones.
    pub fn hinge(slope: f64) -> Self {
        Self {
            breakpoints: alloc::vec![(0.0, 0.0)],
            left_slope: 0.0,
            right_slope: slope,
        }
    }

    pub fn breakpoints(&self) -> &[(f64, f64)] {
        &self.breakpoints
    }

    pub fn left_slope(&self) -> f64 {
        self.left_slope
    }

    pub fn right_slope(&self) -> f64 {
        self.right_slope
    }

    pub fn evaluate(&self, x: f64) -> f64 {
        let bp = &self.breakpoints;
        let (x0, y0) = bp[0];
        if x <= x0 {
            return y0 + self.left_slope * (x - x0);
        }
        let (xn, yn) = bp[bp.len() - 1];
        if x >= xn {
            return yn + self.right_slope * (x - xn);
        }
        // first breakpoint strictly right of x; exists because x < xn
        let hi = bp.partition_point(|&(bx, _)| bx <= x);
        let (xa, ya) = bp[hi - 1];
        let (xb, yb) = bp[hi];
        ya + (yb - ya) * (x - xa) / (xb - xa)
    }

    /// Slopes from left to right: left extension, one per interior segment,
    /// right extension.
    pub fn slopes(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.breakpoints.len() + 1);
        out.push(self.left_slope);
        for w in self.breakpoints.windows(2) {
            out.push((w[1].1 - w[0].1) / (w[1].0 - w[0].0));
        }
        out.push(self.right_slope);
        out
    }

    /// Largest absolute slope, the function's "rate" parameter.
    pub fn max_abs_slope(&self) -> f64 {
        self.slopes().into_iter().fold(0.0, |m, s| m.max(s.abs()))
    }

    /// Flags that hold for this function.
    pub fn shape(&self) -> Shape {
        let slopes = self.slopes();
        let mut shape = Shape {
            convex: true,
            concave: true,
            nondecreasing: true,
        };
        for (i, &s) in slopes.iter().enumerate() {
            if s < -SLOPE_TOLERANCE {
                shape.nondecreasing = false;
            }
            if i > 0 {
                let d = s - slopes[i - 1];
                if d < -SLOPE_TOLERANCE {
                    shape.convex = false;
                }
                if d > SLOPE_TOLERANCE {
                    shape.concave = false;
                }
            }
        }
        shape
    }

    pub fn verify_shape(&self, required: Shape) -> Result<(), ShapeViolation> {
        let slopes = self.slopes();
        for (i, &s) in slopes.iter().enumerate() {
            if required.nondecreasing && s < -SLOPE_TOLERANCE {
                return Err(ShapeViolation {
                    property: ShapeProperty::Nondecreasing,
                    segment: i,
                });
            }
            if i == 0 {
                continue;
            }
            let d = s - slopes[i - 1];
            if required.convex && d < -SLOPE_TOLERANCE {
                return Err(ShapeViolation {
                    property: ShapeProperty::Convex,
                    segment: i,
                });
            }
            if required.concave && d > SLOPE_TOLERANCE {
                return Err(ShapeViolation {
                    property: ShapeProperty::Concave,
                    segment: i,
                });
            }
        }
        Ok(())
    }

    /// True when the function is identically zero on `(-inf, 0]`.
    pub fn vanishes_on_nonpositive(&self) -> bool {
        if self.left_slope.abs() > SLOPE_TOLERANCE {
            return false;
        }
        let tol = SLOPE_TOLERANCE * (1.0 + self.breakpoints[0].0.abs());
        self.evaluate(0.0).abs() <= tol
            && self
                .breakpoints
                .iter()
                .filter(|&&(x, _)| x <= 0.0)
                .all(|&(_, y)| y.abs() <= tol)
    }

    /// Supporting lines, one per distinct slope.
    ///
    /// For a convex function the pointwise maximum of the cuts reproduces
    /// it; for a concave one, the pointwise minimum. A linear function yields
    /// a single cut.
    pub fn cuts(&self) -> Result<Vec<Cut>, FunctionError> {
        let shape = self.shape();
        if !shape.convex && !shape.concave {
            return Err(FunctionError::NeitherConvexNorConcave);
        }
        let slopes = self.slopes();
        let bp = &self.breakpoints;
        let mut cuts: Vec<Cut> = Vec::with_capacity(slopes.len());
        for (i, &slope) in slopes.iter().enumerate() {
            // piece i starts at breakpoint i-1 and ends at breakpoint i
            let (px, py) = if i == 0 { bp[0] } else { bp[i - 1] };
            if let Some(last) = cuts.last() {
                if (last.slope - slope).abs() <= SLOPE_TOLERANCE {
                    continue;
                }
            }
            cuts.push(Cut {
                slope,
                intercept: py - slope * px,
            });
        }
        Ok(cuts)
    }

    /// Same shape with every value and slope multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            breakpoints: self
                .breakpoints
                .iter()
                .map(|&(x, y)| (x, y * factor))
                .collect(),
            left_slope: self.left_slope * factor,
            right_slope: self.right_slope * factor,
        }
    }
}
