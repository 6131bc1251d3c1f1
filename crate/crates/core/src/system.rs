//! Musical systems `(Z_n, s)` with `n = p·q` and the objects read off their
//! oriented Cayley graph: chords, circles of fifths and scales.

use serde::{Deserialize, Serialize};

use crate::cayley::{CayleyGraph, GeneratorSet};
use crate::error::{Error, Result};
use crate::modular::{gcd, ModRing};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Quality {
    Major,
    Minor,
}

impl std::str::FromStr for Quality {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "major" | "maj" | "m" => Ok(Quality::Major),
            "minor" | "min" => Ok(Quality::Minor),
            other => Err(format!("unknown quality {other:?}, expected major or minor")),
        }
    }
}

/// Classification of a chord by its first two steps.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ChordQuality {
    Major,
    Minor,
    /// Fewer than two steps.
    Dyad,
    /// Opens with a repeated generator, e.g. diminished or augmented triads.
    Other,
}

impl From<Quality> for ChordQuality {
    fn from(q: Quality) -> Self {
        match q {
            Quality::Major => ChordQuality::Major,
            Quality::Minor => ChordQuality::Minor,
        }
    }
}

/// `(Z_n, s)` with `n = p·q`, `gcd(p, q) = 1`, `p > q > 1`, tuned from `f0`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MusicalSystem {
    n: u32,
    p: u32,
    q: u32,
    s: f64,
    f0: f64,
    /// The factors were supplied as `q > p` and swapped.
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    swapped: bool,
}

impl MusicalSystem {
    pub fn validate(n: u32, p: u32, q: u32, s: f64, f0: f64) -> Result<Self> {
        if p <= 1 || q <= 1 {
            return Err(Error::TrivialFactor { p, q });
        }
        if gcd(u64::from(p), u64::from(q)) != 1 {
            return Err(Error::NotCoprime { p, q });
        }
        if u64::from(n) != u64::from(p) * u64::from(q) {
            return Err(Error::FactorMismatch { n, p, q });
        }
        if !(s > 1.0 && s.is_finite()) {
            return Err(Error::InvalidOctaveRatio(s));
        }
        if !(f0 > 0.0 && f0.is_finite()) {
            return Err(Error::InvalidBaseFrequency(f0));
        }
        let (p, q, swapped) = if q > p { (q, p, true) } else { (p, q, false) };
        let system = Self {
            n,
            p,
            q,
            s,
            f0,
            swapped,
        };
        let generators = system.generators();
        if !generators.is_generating() {
            return Err(Error::NotGenerating(generators.elements().to_vec(), n));
        }
        Ok(system)
    }

    /// Derives `n = p·q`.
    pub fn from_factors(p: u32, q: u32, s: f64, f0: f64) -> Result<Self> {
        let n = p
            .checked_mul(q)
            .ok_or(Error::FactorMismatch { n: u32::MAX, p, q })?;
        Self::validate(n, p, q, s, f0)
    }

    /// Twelve-tone equal temperament, `Z_12 = <3, 4>`, octave 2, A440.
    pub fn western() -> Self {
        Self::validate(12, 4, 3, 2.0, 440.0).expect("the 12-tone system is valid")
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn octave_ratio(&self) -> f64 {
        self.s
    }

    pub fn base_frequency(&self) -> f64 {
        self.f0
    }

    pub fn was_swapped(&self) -> bool {
        self.swapped
    }

    pub fn with_base_frequency(&self, f0: f64) -> Result<Self> {
        Self::validate(self.n, self.p, self.q, self.s, f0)
    }

    pub fn ring(&self) -> ModRing {
        ModRing::new(self.n).expect("n = pq > 2")
    }

    /// `{q, p}`.
    pub fn generators(&self) -> GeneratorSet {
        GeneratorSet::new(self.ring(), [i64::from(self.p), i64::from(self.q)])
            .expect("p and q are nonzero residues")
    }

    /// `{p, q, n − p, n − q}`.
    pub fn symmetric_generators(&self) -> GeneratorSet {
        self.generators().symmetrize()
    }

    pub fn oriented_graph(&self) -> Result<CayleyGraph> {
        CayleyGraph::oriented(self.generators())
    }

    pub fn unoriented_graph(&self) -> Result<CayleyGraph> {
        CayleyGraph::unoriented(self.generators())
    }

    fn is_twelve_tone(&self) -> bool {
        self.n == 12 && self.p == 4 && self.q == 3
    }

    fn opening(&self, quality: Quality) -> [u32; 2] {
        match quality {
            Quality::Major => [self.p, self.q],
            Quality::Minor => [self.q, self.p],
        }
    }

    pub fn triad(&self, root: u32, quality: Quality) -> Chord {
        self.chord_from_steps(root, &self.opening(quality))
            .expect("a triad never self-intersects when p + q < n")
    }

    /// Walks `steps` from `root`; every step must be `p` or `q` and the walk
    /// may only revisit a note by closing on the root at the very end.
    pub fn chord_from_steps(&self, root: u32, steps: &[u32]) -> Result<Chord> {
        if steps.is_empty() {
            return Err(Error::EmptyChord);
        }
        let ring = self.ring();
        if root >= self.n {
            return Err(Error::ResidueOutOfRange {
                residue: root,
                n: self.n,
            });
        }
        let mut notes = vec![root];
        let mut seen = vec![false; self.n as usize];
        seen[root as usize] = true;
        let mut cur = root;
        for (i, &step) in steps.iter().enumerate() {
            if step != self.p && step != self.q {
                return Err(Error::InvalidStep {
                    step,
                    p: self.p,
                    q: self.q,
                });
            }
            cur = ring.add_raw(cur, step);
            let closes = i + 1 == steps.len() && cur == root;
            if seen[cur as usize] && !closes {
                return Err(Error::SelfIntersecting { note: cur });
            }
            seen[cur as usize] = true;
            notes.push(cur);
        }
        let quality = match steps {
            [a, b, ..] if [*a, *b] == self.opening(Quality::Major) => ChordQuality::Major,
            [a, b, ..] if [*a, *b] == self.opening(Quality::Minor) => ChordQuality::Minor,
            [_] => ChordQuality::Dyad,
            _ => ChordQuality::Other,
        };
        Ok(Chord {
            n: self.n,
            root,
            quality,
            steps: steps.to_vec(),
            notes,
        })
    }

    /// Extends the triad by strictly alternating generators while the total
    /// span stays within `n` and the walk stays simple.
    pub fn largest_chord_within_octave(&self, root: u32, quality: Quality) -> Chord {
        let opening = self.opening(quality);
        let mut steps: Vec<u32> = Vec::new();
        let mut span = 0u64;
        loop {
            let next = opening[steps.len() % 2];
            if span + u64::from(next) > u64::from(self.n) {
                break;
            }
            steps.push(next);
            if self.chord_from_steps(root, &steps).is_err() {
                steps.pop();
                break;
            }
            span += u64::from(next);
        }
        self.chord_from_steps(root, &steps)
            .expect("steps were validated while extending")
    }

    pub fn circle_of_fifths(&self) -> CircleOfFifths {
        CircleOfFifths::new(self.ring(), self.p + self.q)
            .expect("gcd(p + q, pq) = 1 for coprime p, q")
    }

    /// The major or minor scale on `root`: the largest within-octave chord
    /// with each leg filled by whole steps (2) and at most one half step (1).
    /// The closing leg back to the root is left unfilled.
    pub fn scale(&self, root: u32, quality: Quality) -> Scale {
        let backbone = self.largest_chord_within_octave(root, quality);
        let ring = self.ring();
        let mut offsets = vec![0u32];
        let mut q_legs = 0usize;
        for &leg in &backbone.steps {
            let semitone_first = leg % 2 == 1 && self.odd_leg_starts_with_one(quality, leg, q_legs);
            if leg == self.q {
                q_legs += 1;
            }
            let base = *offsets.last().expect("non-empty");
            offsets.extend(leg_pattern(leg, semitone_first).scan(base, |acc, d| {
                *acc += d;
                Some(*acc)
            }));
        }
        offsets.push(self.n);
        let notes: Vec<u32> = offsets
            .iter()
            .map(|&o| ring.add_raw(root, o % self.n))
            .collect();
        let steps = offsets.windows(2).map(|w| w[1] - w[0]).collect();
        Scale {
            n: self.n,
            root,
            quality,
            notes,
            steps,
            backbone,
        }
    }

    /// Placement of the half step in an odd leg: `'12…2'` when true,
    /// `'2…21'` otherwise.
    fn odd_leg_starts_with_one(&self, quality: Quality, leg: u32, q_legs_before: usize) -> bool {
        if self.p % 2 == 1 || leg != self.q {
            return false;
        }
        match quality {
            // The classical 12-tone major scale (2 2 1 2 2 2 1) fills its
            // minor-third leg as '12'.
            Quality::Major => self.is_twelve_tone(),
            Quality::Minor => q_legs_before % 2 == 1,
        }
    }

    /// Named step patterns. The 12-tone system gets the classical names;
    /// other systems get the same templates with `p`, `q` substituted.
    pub fn chord_catalog(&self) -> Vec<ChordPattern> {
        use Gen::{P, Q};
        const TEMPLATES: &[(&str, &[Gen])] = &[
            ("Major Triad", &[P, Q]),
            ("Minor Triad", &[Q, P]),
            ("Diminished Triad", &[Q, Q]),
            ("Augmented Triad", &[P, P]),
            ("Major 7th", &[P, Q, P]),
            ("Dominant 7th", &[P, Q, Q]),
            ("Minor 7th", &[Q, P, Q]),
            ("Fully Diminished 7th", &[Q, Q, Q]),
            ("Half Diminished 7th", &[Q, Q, P]),
            ("Augmented Major 7th", &[P, P, Q]),
            ("Major 9th", &[P, Q, P, Q]),
            ("Minor 9th", &[Q, P, Q, P]),
            ("Dominant 9th", &[P, Q, Q, P]),
            ("Dominant Flat 9th", &[P, Q, Q, Q]),
            ("Half Diminished Flat 9th", &[Q, Q, P, Q]),
        ];
        let classical = self.is_twelve_tone();
        TEMPLATES
            .iter()
            .map(|(name, template)| {
                let steps: Vec<u32> = template
                    .iter()
                    .map(|g| match g {
                        P => self.p,
                        Q => self.q,
                    })
                    .collect();
                let name = if classical {
                    (*name).to_string()
                } else {
                    generic_name(template)
                };
                ChordPattern { name, steps }
            })
            .collect()
    }
}

impl MusicalSystem {
    /// The catalog instantiated on `root`, optionally restricted to one
    /// quality. Patterns that revisit a note before closing are skipped.
    pub fn named_chords(&self, root: u32, quality: Option<Quality>) -> Result<Vec<NamedChord>> {
        if root >= self.n {
            return Err(Error::ResidueOutOfRange {
                residue: root,
                n: self.n,
            });
        }
        let wanted = quality.map(|q| match q {
            Quality::Major => ChordQuality::Major,
            Quality::Minor => ChordQuality::Minor,
        });
        Ok(self
            .chord_catalog()
            .into_iter()
            .filter_map(|pattern| {
                let chord = self.chord_from_steps(root, &pattern.steps).ok()?;
                wanted
                    .is_none_or(|w| chord.quality == w)
                    .then_some(NamedChord {
                        name: pattern.name,
                        chord,
                    })
            })
            .collect())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NamedChord {
    pub name: String,
    #[serde(flatten)]
    pub chord: Chord,
}

#[derive(Clone, Copy)]
enum Gen {
    P,
    Q,
}

fn generic_name(template: &[Gen]) -> String {
    let letters: Vec<&str> = template
        .iter()
        .map(|g| match g {
            Gen::P => "p",
            Gen::Q => "q",
        })
        .collect();
    match letters.as_slice() {
        ["p", "q"] => "major triad".into(),
        ["q", "p"] => "minor triad".into(),
        _ => {
            let kind = match template.len() {
                2 => "triad",
                3 => "tetrad",
                _ => "pentad",
            };
            format!("{kind} ({})", letters.join(","))
        }
    }
}

fn leg_pattern(leg: u32, semitone_first: bool) -> impl Iterator<Item = u32> {
    let twos = leg / 2;
    let odd = leg % 2 == 1;
    let lead = (odd && semitone_first).then_some(1);
    let tail = (odd && !semitone_first).then_some(1);
    lead.into_iter()
        .chain(std::iter::repeat_n(2, twos as usize))
        .chain(tail)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChordPattern {
    pub name: String,
    pub steps: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Chord {
    pub n: u32,
    pub root: u32,
    pub quality: ChordQuality,
    pub steps: Vec<u32>,
    pub notes: Vec<u32>,
}

impl Chord {
    pub fn span(&self) -> u64 {
        self.steps.iter().map(|&s| u64::from(s)).sum()
    }

    /// Total span at most `n`.
    pub fn is_within_octave(&self) -> bool {
        self.span() <= u64::from(self.n)
    }

    pub fn is_closed(&self) -> bool {
        self.notes.len() > 1 && self.notes.first() == self.notes.last()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CircleOfFifths {
    pub n: u32,
    pub step: u32,
    /// `[i·step mod n]` for `i = 0..=n`.
    pub sequence: Vec<u32>,
    pub trivial: bool,
}

impl CircleOfFifths {
    /// The orbit of 0 under repeated addition of `step`, which must be a
    /// unit so that the orbit covers the ring.
    pub fn new(ring: ModRing, step: u32) -> Result<Self> {
        let n = ring.modulus();
        let step = step % n;
        if !ring.is_unit(step) {
            return Err(Error::NotAUnit { h: step, n });
        }
        let sequence = (0..=n).map(|i| ring.mul_raw(i, step)).collect();
        Ok(Self {
            n,
            step,
            sequence,
            trivial: step == 1,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Scale {
    pub n: u32,
    pub root: u32,
    pub quality: Quality,
    /// Starts and ends on the root.
    pub notes: Vec<u32>,
    /// Differences between consecutive notes, including the closing leg.
    pub steps: Vec<u32>,
    pub backbone: Chord,
}

/// Pythagorean ratios next to equal-tempered ones for the 12-tone chromatic
/// scale.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IntervalRow {
    pub index: u32,
    pub name: &'static str,
    pub pythagorean: (u64, u64),
    pub temperate: f64,
    /// `|log2(pythagorean) − index/12|`.
    pub deviation: f64,
}

pub fn interval_table() -> Vec<IntervalRow> {
    const ROWS: [(&str, u64, u64); 12] = [
        ("unison", 1, 1),
        ("minor second", 256, 243),
        ("major second", 9, 8),
        ("minor third", 32, 27),
        ("major third", 81, 64),
        ("fourth", 4, 3),
        ("tritone", 729, 512),
        ("fifth", 3, 2),
        ("minor sixth", 128, 81),
        ("major sixth", 27, 16),
        ("minor seventh", 16, 9),
        ("major seventh", 243, 128),
    ];
    ROWS.iter()
        .zip(0u32..)
        .map(|(&(name, num, den), index)| {
            let exponent = f64::from(index) / 12.0;
            IntervalRow {
                index,
                name,
                pythagorean: (num, den),
                temperate: exponent.exp2(),
                deviation: ((num as f64 / den as f64).log2() - exponent).abs(),
            }
        })
        .collect()
}
