use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("modulus must be at least 2, got {0}")]
    ModulusTooSmall(u32),
    #[error("modulus {n} exceeds the supported maximum of {max}")]
    ModulusTooLarge { n: u32, max: u32 },
    #[error("modulus mismatch: {left} vs {right}")]
    ModulusMismatch { left: u32, right: u32 },
    #[error("{h} is not a unit modulo {n}")]
    NotAUnit { h: u32, n: u32 },

    #[error("0 cannot be used as a generator")]
    ZeroGenerator,
    #[error("generator set is empty")]
    EmptyGenerators,
    #[error("vertex {to} is unreachable from {from}")]
    Unreachable { from: u32, to: u32 },
    #[error("generator set {0:?} is not symmetric")]
    NotSymmetric(Vec<u32>),
    #[error("generator set {0:?} does not generate Z_{1}")]
    NotGenerating(Vec<u32>, u32),

    #[error("p={p} and q={q} are not coprime")]
    NotCoprime { p: u32, q: u32 },
    #[error("n={n} is not the product of p={p} and q={q}")]
    FactorMismatch { n: u32, p: u32, q: u32 },
    #[error("factors must both exceed 1, got p={p}, q={q}")]
    TrivialFactor { p: u32, q: u32 },
    #[error("octave ratio must exceed 1, got {0}")]
    InvalidOctaveRatio(f64),
    #[error("base frequency must be positive, got {0}")]
    InvalidBaseFrequency(f64),

    #[error("step {step} is not one of the system generators {p}, {q}")]
    InvalidStep { step: u32, p: u32, q: u32 },
    #[error("chord path revisits note {note} before closing")]
    SelfIntersecting { note: u32 },
    #[error("a chord needs at least one step")]
    EmptyChord,
    #[error("residue {residue} is outside Z_{n}")]
    ResidueOutOfRange { residue: u32, n: u32 },

    #[error("consonant and dissonant sets overlap at {0}")]
    OverlappingDichotomy(u32),
    #[error("dichotomy does not cover Z_{0}")]
    NotAPartition(u32),
    #[error("no strong dichotomy exists for odd n={0}")]
    OddModulus(u32),
    #[error("{0} does not satisfy the weak counterpoint condition")]
    NotAWeakWitness(String),
    #[error("no partitions to refine")]
    NoPartitions,
    #[error("oriented refinement is ambiguous between {0:?}")]
    AmbiguousRefinement(Vec<Vec<u32>>),

    #[error("frequency must be positive, got {0}")]
    InvalidFrequency(f64),
    #[error("duration must be positive, got {0}")]
    InvalidDuration(f64),
    #[error("invalid envelope: {0}")]
    InvalidEnvelope(String),
    #[error("buffers differ in length or sample rate")]
    BufferMismatch,
    #[error("invalid mix weights: {0}")]
    InvalidWeights(String),
    #[error("render plan has no events")]
    EmptyPlan,

    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Wav(#[from] hound::Error),
}

impl Error {
    /// True for errors caused by bad input rather than by the environment.
    pub fn is_validation(&self) -> bool {
        !matches!(self, Error::Io(_) | Error::Wav(_))
    }
}
