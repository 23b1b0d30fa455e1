//! Generator shapes and value grids of the standard threshold experiments, at
//! desk-scale trial counts. `--trials 128` runs them at full size.

use clap::ValueEnum;

use hamanneal::experiments::SweepParameter;
use hamanneal::GeneratorKind;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Preset {
    /// Cycles found vs k; planted, N = 150, m = 0.5.
    Fig2,
    /// Cycles found vs m; planted random roads, N = 150.
    Fig3,
    /// Cycles found vs m; random roads, nothing planted, N = 200.
    Fig4,
    /// Cycles found vs m; planted cycle plus stride roads.
    Fig5,
    /// Stride roads only; guaranteed cycle-free.
    Table1,
    /// Large instances; planted, N in {200, 300, 400, 500}.
    Table2,
}

pub struct Shape {
    pub kind: GeneratorKind,
    pub parameter: SweepParameter,
    pub n: usize,
    pub m: Option<f64>,
    pub values: Vec<f64>,
    pub trials: u64,
}

const TABLE1_M: [f64; 16] = [0.1, 0.2, 0.3, 0.4, 0.42, 0.44, 0.46, 0.48, 0.5, 0.52, 0.54, 0.6, 0.7, 0.8, 0.9, 1.0];

const PLANTED_M: [f64; 14] = [0.3, 0.4, 0.42, 0.44, 0.46, 0.48, 0.5, 0.52, 0.54, 0.56, 0.58, 0.6, 0.7, 0.8];

impl Preset {
    pub fn shape(self) -> Shape {
        match self {
            Preset::Fig2 => Shape {
                kind: GeneratorKind::RandomPlanted,
                parameter: SweepParameter::K,
                n: 150,
                m: Some(0.5),
                values: vec![0.05, 0.1, 0.2, 0.3, 0.4, 0.6, 0.8, 1.2, 1.6, 2.0, 3.2],
                trials: 16,
            },
            Preset::Fig3 => Shape {
                kind: GeneratorKind::RandomPlanted,
                parameter: SweepParameter::M,
                n: 150,
                m: None,
                values: PLANTED_M.to_vec(),
                trials: 16,
            },
            // Spans both the 0.9 onset and the m = 4 saturation point.
            Preset::Fig4 => Shape {
                kind: GeneratorKind::RandomUnplanted,
                parameter: SweepParameter::M,
                n: 200,
                m: None,
                values: vec![0.5, 0.58, 0.7, 0.8, 0.9, 1.0, 1.2, 1.5, 2.0, 3.0, 4.0, 5.0],
                trials: 16,
            },
            Preset::Fig5 => Shape {
                kind: GeneratorKind::StridePlanted,
                parameter: SweepParameter::M,
                n: 150,
                m: None,
                values: PLANTED_M.to_vec(),
                trials: 16,
            },
            Preset::Table1 => Shape {
                kind: GeneratorKind::StrideUnplanted,
                parameter: SweepParameter::M,
                n: 200,
                m: None,
                values: TABLE1_M.to_vec(),
                trials: 16,
            },
            Preset::Table2 => Shape {
                kind: GeneratorKind::RandomPlanted,
                parameter: SweepParameter::N,
                n: 200,
                m: Some(0.7),
                values: vec![200.0, 300.0, 400.0, 500.0],
                trials: 16,
            },
        }
    }
}
