use std::sync::OnceLock;

use super::frame::{det3, FrameField};
use crate::error::{Error, Point, Result};
use crate::polyexpr::{lie_bracket, CompiledSet, RationalField3, RationalFn, Var};

/// Structure-constant table `c[i][j][k]` with frame indices 0 → X₀, 1 → X₁,
/// 2 → X₂ and `[Xⱼ, Xᵢ] = Σₖ c[i][j][k] Xₖ`.
pub type ConstTable<T> = [[[T; 3]; 3]; 3];

/// Index pairs (i < j) carrying the independent constants.
const PAIRS: [(usize, usize); 3] = [(0, 1), (0, 2), (1, 2)];

type DerivCell = OnceLock<RationalFn>;

/// Frame-dependent quantities derived exactly from a frame pair: the
/// normalized contact form ω, its differential, the Reeb field X₀ and the
/// structure constants in the frame {X₀, X₁, X₂}.
#[derive(Debug)]
pub struct ContactStructure {
    frame: FrameField,
    x3: RationalField3,
    det: RationalFn,
    /// Coframe dual to {X₁, X₂, X₃}; row `i` is the covector νᵢ.
    coframe_x3: [[RationalFn; 3]; 3],
    omega: [RationalFn; 3],
    domega: [[RationalFn; 3]; 3],
    reeb: RationalField3,
    c: ConstTable<RationalFn>,
    dc: Box<[ConstTable<DerivCell>; 3]>,
    flow: OnceLock<FlowEvaluator>,
}

fn cross(a: &[RationalFn; 3], b: &[RationalFn; 3]) -> [RationalFn; 3] {
    [
        &(&a[1] * &b[2]) - &(&a[2] * &b[1]),
        &(&a[2] * &b[0]) - &(&a[0] * &b[2]),
        &(&a[0] * &b[1]) - &(&a[1] * &b[0]),
    ]
}

fn dot(a: &[RationalFn; 3], b: &[RationalFn; 3]) -> RationalFn {
    &(&(&a[0] * &b[0]) + &(&a[1] * &b[1])) + &(&a[2] * &b[2])
}

impl ContactStructure {
    /// Derives ω, dω, X₀ and cᵢⱼᵏ from the frame.
    pub fn derive(frame: FrameField) -> Result<ContactStructure> {
        frame.check_at([0.0; 3])?;
        let x3 = frame.x3();
        let r1 = frame.x1.components.clone();
        let r2 = frame.x2.components.clone();
        let r3 = x3.components.clone();
        let c23 = cross(&r2, &r3);
        let c31 = cross(&r3, &r1);
        let c12 = cross(&r1, &r2);
        let det = dot(&r1, &c23);
        let inv_det = det.recip().ok_or(Error::Degenerate {
            point: [0.0; 3],
            det: 0.0,
            threshold: super::DET_THRESHOLD,
        })?;
        let over = |v: [RationalFn; 3]| v.map(|e| &e * &inv_det);
        let coframe_x3 = [over(c23), over(c31), over(c12)];
        let omega = coframe_x3[2].clone();

        let domega = std::array::from_fn(|i| {
            std::array::from_fn(|j| {
                &omega[j].partial(Var::from_index(i)) - &omega[i].partial(Var::from_index(j))
            })
        });

        let pair = |v: &RationalField3| -> [RationalFn; 3] {
            std::array::from_fn(|i| dot(&coframe_x3[i], &v.components))
        };
        let p_x3x1 = pair(&lie_bracket(&x3, &frame.x1));
        let p_x3x2 = pair(&lie_bracket(&x3, &frame.x2));
        let c12_1 = -&p_x3x2[2];
        let c12_2 = p_x3x1[2].clone();
        let reeb = x3
            .sub(&frame.x1.mul_fn(&c12_1))
            .sub(&frame.x2.mul_fn(&c12_2));

        // Coordinates of v in {X₀, X₁, X₂} from those in {X₁, X₂, X₃}.
        let in_frame = |v: &RationalField3| -> [RationalFn; 3] {
            let p = pair(v);
            [
                p[2].clone(),
                &p[0] + &(&p[2] * &c12_1),
                &p[1] + &(&p[2] * &c12_2),
            ]
        };
        let fields = [&reeb, &frame.x1, &frame.x2];
        let mut c: ConstTable<RationalFn> =
            std::array::from_fn(|_| std::array::from_fn(|_| std::array::from_fn(|_| RationalFn::zero())));
        for (i, j) in PAIRS {
            let coords = if (i, j) == (1, 2) {
                [RationalFn::one(), c12_1.clone(), c12_2.clone()]
            } else {
                in_frame(&lie_bracket(fields[j], fields[i]))
            };
            for k in 0..3 {
                c[j][i][k] = -&coords[k];
                c[i][j][k] = coords[k].clone();
            }
        }

        Ok(ContactStructure {
            frame,
            x3,
            det,
            coframe_x3,
            omega,
            domega,
            reeb,
            c,
            dc: Box::new(std::array::from_fn(|_| {
                std::array::from_fn(|_| std::array::from_fn(|_| std::array::from_fn(|_| OnceLock::new())))
            })),
            flow: OnceLock::new(),
        })
    }

    pub fn frame(&self) -> &FrameField {
        &self.frame
    }

    /// X₃ = [X₂, X₁].
    pub fn x3(&self) -> &RationalField3 {
        &self.x3
    }

    /// det(X₁, X₂, X₃) as a rational function.
    pub fn det(&self) -> &RationalFn {
        &self.det
    }

    pub fn omega(&self) -> &[RationalFn; 3] {
        &self.omega
    }

    /// dω(∂ᵢ, ∂ⱼ).
    pub fn domega(&self) -> &[[RationalFn; 3]; 3] {
        &self.domega
    }

    pub fn reeb(&self) -> &RationalField3 {
        &self.reeb
    }

    /// Field with frame index `i` (0 → X₀, 1 → X₁, 2 → X₂).
    pub fn field(&self, i: usize) -> &RationalField3 {
        match i {
            0 => &self.reeb,
            1 => &self.frame.x1,
            2 => &self.frame.x2,
            _ => panic!("frame index {i} out of range"),
        }
    }

    /// cᵢⱼᵏ as a rational function.
    pub fn constant(&self, i: usize, j: usize, k: usize) -> &RationalFn {
        &self.c[i][j][k]
    }

    pub fn constants(&self) -> &ConstTable<RationalFn> {
        &self.c
    }

    /// Xₘ(cᵢⱼᵏ), built on first use.
    pub fn constant_derivative(&self, m: usize, i: usize, j: usize, k: usize) -> &RationalFn {
        self.dc[m][i][j][k].get_or_init(|| {
            if i == j {
                RationalFn::zero()
            } else if i > j {
                -self.constant_derivative(m, j, i, k)
            } else {
                self.field(m).apply(&self.c[i][j][k])
            }
        })
    }

    /// Coordinates of a vector in the frame {X₀, X₁, X₂} at `p`.
    pub fn frame_coordinates(&self, p: Point, v: [f64; 3]) -> [f64; 3] {
        let q: [f64; 3] = std::array::from_fn(|i| {
            (0..3).map(|j| self.coframe_x3[i][j].eval(p) * v[j]).sum()
        });
        let c1 = self.c[1][2][1].eval(p);
        let c2 = self.c[1][2][2].eval(p);
        [q[2], q[0] + q[2] * c1, q[1] + q[2] * c2]
    }

    /// Evaluates the table at a point, failing on a pole.
    pub fn constants_at(&self, p: Point) -> Result<ConstTable<f64>> {
        self.ensure_regular(p)?;
        let mut out = [[[0.0; 3]; 3]; 3];
        for (i, j) in PAIRS {
            for k in 0..3 {
                let v = self.c[i][j][k].eval(p);
                out[i][j][k] = v;
                out[j][i][k] = -v;
            }
        }
        Ok(out)
    }

    /// Fails if the frame degenerates at `p`, which is where every derived
    /// denominator vanishes.
    pub fn ensure_regular(&self, p: Point) -> Result<f64> {
        let d = det3(self.frame.x1.eval(p), self.frame.x2.eval(p), self.x3.eval(p));
        if !d.is_finite() || d.abs() < super::DET_THRESHOLD {
            return Err(Error::Pole(p));
        }
        Ok(d)
    }

    /// Compiled evaluator for the geodesic right-hand side.
    pub fn flow(&self) -> &FlowEvaluator {
        self.flow.get_or_init(|| FlowEvaluator::new(self))
    }
}

/// Frame components and the six constants entering the geodesic equations.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct FlowCoeffs {
    pub x1: [f64; 3],
    pub x2: [f64; 3],
    pub c01_1: f64,
    pub c01_2: f64,
    pub c02_1: f64,
    pub c02_2: f64,
    pub c12_1: f64,
    pub c12_2: f64,
}

#[derive(Clone, Debug)]
pub struct FlowEvaluator {
    set: CompiledSet,
}

impl FlowEvaluator {
    fn new(s: &ContactStructure) -> FlowEvaluator {
        let f = &s.frame;
        let fns: Vec<&RationalFn> = f
            .x1
            .components
            .iter()
            .chain(f.x2.components.iter())
            .chain([
                &s.c[0][1][1],
                &s.c[0][1][2],
                &s.c[0][2][1],
                &s.c[0][2][2],
                &s.c[1][2][1],
                &s.c[1][2][2],
            ])
            .collect();
        FlowEvaluator { set: CompiledSet::new(fns) }
    }

    /// Coefficients at `p`, or a pole error if a denominator base is
    /// numerically zero there.
    #[inline]
    pub fn eval(&self, p: Point) -> Result<FlowCoeffs> {
        let mut v = [0.0; 12];
        let min_den = self.set.eval_into(p, &mut v);
        if min_den < 1e-12 || v.iter().any(|x| !x.is_finite()) {
            return Err(Error::Pole(p));
        }
        Ok(FlowCoeffs {
            x1: [v[0], v[1], v[2]],
            x2: [v[3], v[4], v[5]],
            c01_1: v[6],
            c01_2: v[7],
            c02_1: v[8],
            c02_2: v[9],
            c12_1: v[10],
            c12_2: v[11],
        })
    }
}
