//! Equal-temperament tuning and sample-level rendering.
//!
//! Note `k` of a system sounds at `f0 · s^(k/n)`. Buffers hold `f64`
//! samples in `[-1, 1]` and are written as 16-bit mono PCM.

use std::f64::consts::TAU;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::system::{MusicalSystem, Quality};

pub const SAMPLE_RATE: u32 = 44_100;

/// `f0 · s^(k/n) · s^octave_shift`. `k` is not reduced modulo `n`.
pub fn note_frequency(system: &MusicalSystem, k: i64, octave_shift: i32) -> f64 {
    let s = system.octave_ratio();
    system.base_frequency() * s.powf(k as f64 / f64::from(system.n())) * s.powi(octave_shift)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ToneSpec {
    pub frequency: f64,
    pub duration: f64,
}

impl ToneSpec {
    pub fn new(frequency: f64, duration: f64) -> Result<Self> {
        if !(frequency > 0.0 && frequency.is_finite()) {
            return Err(Error::InvalidFrequency(frequency));
        }
        if !(duration > 0.0 && duration.is_finite()) {
            return Err(Error::InvalidDuration(duration));
        }
        Ok(Self {
            frequency,
            duration,
        })
    }

    fn validate(&self) -> Result<()> {
        Self::new(self.frequency, self.duration).map(|_| ())
    }
}

/// Linear attack, linear decay to `sustain_level`, flat sustain, linear
/// release ending at the end of the note.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Envelope {
    pub attack: f64,
    pub decay: f64,
    pub sustain_level: f64,
    pub release: f64,
}

impl Default for Envelope {
    fn default() -> Self {
        Self {
            attack: 0.02,
            decay: 0.05,
            sustain_level: 0.8,
            release: 0.05,
        }
    }
}

impl Envelope {
    /// `g ≡ 1`.
    pub const FLAT: Envelope = Envelope {
        attack: 0.0,
        decay: 0.0,
        sustain_level: 1.0,
        release: 0.0,
    };

    pub fn validate(&self, duration: f64) -> Result<()> {
        for (name, v) in [
            ("attack", self.attack),
            ("decay", self.decay),
            ("release", self.release),
        ] {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(Error::InvalidEnvelope(format!("{name} must be a non-negative time, got {v}")));
            }
        }
        if !(0.0..=1.0).contains(&self.sustain_level) {
            return Err(Error::InvalidEnvelope(format!(
                "sustain level must lie in [0, 1], got {}",
                self.sustain_level
            )));
        }
        let total = self.attack + self.decay + self.release;
        if total > duration {
            return Err(Error::InvalidEnvelope(format!(
                "attack + decay + release = {total}s exceeds the note duration {duration}s"
            )));
        }
        Ok(())
    }

    /// `g(t)` for a note of length `duration`.
    pub fn gain_at(&self, t: f64, duration: f64) -> f64 {
        let release_start = duration - self.release;
        let g = if t < self.attack {
            t / self.attack
        } else if t < self.attack + self.decay {
            1.0 - (1.0 - self.sustain_level) * (t - self.attack) / self.decay
        } else if t < release_start || self.release == 0.0 {
            self.sustain_level
        } else {
            self.sustain_level * (duration - t).max(0.0) / self.release
        };
        g.clamp(0.0, 1.0)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SampleBuffer {
    sample_rate: u32,
    samples: Vec<f64>,
}

impl SampleBuffer {
    pub fn new(sample_rate: u32, samples: Vec<f64>) -> Self {
        Self {
            sample_rate,
            samples,
        }
    }

    pub fn silence(sample_rate: u32, duration: f64) -> Result<Self> {
        if !(duration > 0.0 && duration.is_finite()) {
            return Err(Error::InvalidDuration(duration));
        }
        Ok(Self::new(sample_rate, vec![0.0; sample_count(sample_rate, duration)]))
    }

    pub fn sample_rate(&self) -> u32 {
        self.sample_rate
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn duration(&self) -> f64 {
        self.samples.len() as f64 / f64::from(self.sample_rate)
    }

    pub fn peak(&self) -> f64 {
        self.samples.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    /// Appends in order; rates must agree.
    pub fn concat(buffers: &[SampleBuffer]) -> Result<Self> {
        let Some(first) = buffers.first() else {
            return Err(Error::EmptyPlan);
        };
        if buffers.iter().any(|b| b.sample_rate != first.sample_rate) {
            return Err(Error::BufferMismatch);
        }
        let samples = buffers.iter().flat_map(|b| b.samples.iter().copied()).collect();
        Ok(Self::new(first.sample_rate, samples))
    }
}

fn sample_count(rate: u32, duration: f64) -> usize {
    (duration * f64::from(rate)).round() as usize
}

/// `sin(2π f i / 44100)` for `i < round(44100 t)`.
pub fn pure_tone(spec: ToneSpec) -> Result<SampleBuffer> {
    pure_tone_at(spec, SAMPLE_RATE)
}

pub fn pure_tone_at(spec: ToneSpec, rate: u32) -> Result<SampleBuffer> {
    spec.validate()?;
    let r = f64::from(rate);
    let samples = (0..sample_count(rate, spec.duration))
        .map(|i| (TAU * spec.frequency * i as f64 / r).sin())
        .collect();
    Ok(SampleBuffer::new(rate, samples))
}

/// `g(t) · sin(2π f (t + m · sin(2π f t)))`.
pub fn shape_note(spec: ToneSpec, env: &Envelope, modulation_depth: f64) -> Result<SampleBuffer> {
    shape_note_at(spec, env, modulation_depth, SAMPLE_RATE)
}

pub fn shape_note_at(spec: ToneSpec, env: &Envelope, modulation_depth: f64, rate: u32) -> Result<SampleBuffer> {
    spec.validate()?;
    env.validate(spec.duration)?;
    if !modulation_depth.is_finite() {
        return Err(Error::InvalidEnvelope(format!("modulation depth {modulation_depth}")));
    }
    let r = f64::from(rate);
    let f = spec.frequency;
    let samples = (0..sample_count(rate, spec.duration))
        .map(|i| {
            let base = TAU * f * i as f64 / r;
            let phase = base + TAU * f * modulation_depth * base.sin();
            env.gain_at(i as f64 / r, spec.duration) * phase.sin()
        })
        .collect();
    Ok(SampleBuffer::new(rate, samples))
}

/// Sample-wise weighted average. Weights are normalized to sum to 1.
pub fn mix_chord(buffers: &[SampleBuffer], weights: &[f64]) -> Result<SampleBuffer> {
    let Some(first) = buffers.first() else {
        return Err(Error::InvalidWeights("no buffers to mix".into()));
    };
    if weights.len() != buffers.len() {
        return Err(Error::InvalidWeights(format!(
            "{} weights for {} buffers",
            weights.len(),
            buffers.len()
        )));
    }
    if buffers
        .iter()
        .any(|b| b.len() != first.len() || b.sample_rate != first.sample_rate)
    {
        return Err(Error::BufferMismatch);
    }
    if weights.iter().any(|w| !(*w >= 0.0 && w.is_finite())) {
        return Err(Error::InvalidWeights(format!("{weights:?}")));
    }
    let total: f64 = weights.iter().sum();
    if total <= 0.0 {
        return Err(Error::InvalidWeights("weights sum to zero".into()));
    }
    let samples = (0..first.len())
        .map(|i| {
            let v: f64 = buffers
                .iter()
                .zip(weights)
                .map(|(b, w)| w / total * b.samples[i])
                .sum();
            v.clamp(-1.0, 1.0)
        })
        .collect();
    Ok(SampleBuffer::new(first.sample_rate, samples))
}

/// `1/k` each.
pub fn equal_weights(k: usize) -> Vec<f64> {
    vec![1.0 / k as f64; k]
}

/// Round half away from zero after scaling by 32767, clamped to `i16`.
pub fn quantize(x: f64) -> i16 {
    (x * 32767.0).round().clamp(f64::from(i16::MIN), f64::from(i16::MAX)) as i16
}

pub fn dequantize(v: i16) -> f64 {
    f64::from(v) / 32767.0
}

pub fn write_wav(buffer: &SampleBuffer, path: impl AsRef<Path>) -> Result<()> {
    let spec = hound::WavSpec {
        channels: 1,
        sample_rate: buffer.sample_rate,
        bits_per_sample: 16,
        sample_format: hound::SampleFormat::Int,
    };
    let mut writer = hound::WavWriter::create(path, spec)?;
    for &x in &buffer.samples {
        writer.write_sample(quantize(x))?;
    }
    writer.finalize()?;
    Ok(())
}

pub fn read_wav(path: impl AsRef<Path>) -> Result<SampleBuffer> {
    let mut reader = hound::WavReader::open(path)?;
    let rate = reader.spec().sample_rate;
    let samples = reader
        .samples::<i16>()
        .map(|s| s.map(dequantize))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    Ok(SampleBuffer::new(rate, samples))
}

/// System parameters as they appear in plan files.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SystemParams {
    pub p: u32,
    pub q: u32,
    #[serde(default = "default_s")]
    pub s: f64,
    #[serde(default = "default_f0")]
    pub f0: f64,
}

fn default_s() -> f64 {
    2.0
}

fn default_f0() -> f64 {
    440.0
}

impl SystemParams {
    pub fn system(&self) -> Result<MusicalSystem> {
        MusicalSystem::from_factors(self.p, self.q, self.s, self.f0)
    }
}

impl From<&MusicalSystem> for SystemParams {
    fn from(system: &MusicalSystem) -> Self {
        Self {
            p: system.p(),
            q: system.q(),
            s: system.octave_ratio(),
            f0: system.base_frequency(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlanNote {
    pub residue: u32,
    #[serde(default)]
    pub octave: i32,
}

impl PlanNote {
    /// Splits an absolute note index into residue and octave.
    pub fn from_index(index: i64, n: u32) -> Self {
        let n = i64::from(n);
        Self {
            residue: index.rem_euclid(n) as u32,
            octave: index.div_euclid(n) as i32,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EventKind {
    Note,
    Chord,
    Rest,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlanEvent {
    pub kind: EventKind,
    #[serde(default)]
    pub notes: Vec<PlanNote>,
    pub duration: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<f64>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RenderPlan {
    pub system: SystemParams,
    #[serde(default)]
    pub envelope: Envelope,
    #[serde(default)]
    pub modulation_depth: f64,
    pub events: Vec<PlanEvent>,
}

impl RenderPlan {
    pub fn new(system: &MusicalSystem, events: Vec<PlanEvent>) -> Self {
        Self {
            system: system.into(),
            envelope: Envelope::default(),
            modulation_depth: 0.0,
            events,
        }
    }

    pub fn with_envelope(mut self, envelope: Envelope) -> Self {
        self.envelope = envelope;
        self
    }

    /// One note event per scale entry, rising through the octave.
    pub fn scale(system: &MusicalSystem, root: u32, quality: Quality, duration: f64) -> Self {
        let scale = system.scale(root % system.n(), quality);
        let mut index = i64::from(scale.root);
        let mut events = vec![note_event(PlanNote::from_index(index, system.n()), duration)];
        for &step in &scale.steps {
            index += i64::from(step);
            events.push(note_event(PlanNote::from_index(index, system.n()), duration));
        }
        Self::new(system, events)
    }

    /// The triad on `root` as a single chord event.
    pub fn chord(system: &MusicalSystem, root: u32, quality: Quality, duration: f64) -> Self {
        let triad = system.triad(root % system.n(), quality);
        let mut index = i64::from(triad.root);
        let mut notes = vec![PlanNote::from_index(index, system.n())];
        for &step in &triad.steps {
            index += i64::from(step);
            notes.push(PlanNote::from_index(index, system.n()));
        }
        Self::new(
            system,
            vec![PlanEvent {
                kind: EventKind::Chord,
                notes,
                duration,
                weights: None,
            }],
        )
    }

    /// The circle of fifths, each note in the base octave.
    pub fn circle(system: &MusicalSystem, duration: f64) -> Self {
        let events = system
            .circle_of_fifths()
            .sequence
            .into_iter()
            .map(|residue| note_event(PlanNote { residue, octave: 0 }, duration))
            .collect();
        Self::new(system, events)
    }

    /// Two voices sounded together per step, the lower voice as given and
    /// the upper one an octave above.
    pub fn two_voice(system: &MusicalSystem, cantus: &[u32], counter: &[u32], duration: f64) -> Self {
        let events = cantus
            .iter()
            .zip(counter)
            .map(|(&c, &k)| PlanEvent {
                kind: EventKind::Chord,
                notes: vec![
                    PlanNote {
                        residue: c % system.n(),
                        octave: 0,
                    },
                    PlanNote {
                        residue: k % system.n(),
                        octave: 1,
                    },
                ],
                duration,
                weights: None,
            })
            .collect();
        Self::new(system, events)
    }

    pub fn total_samples(&self) -> usize {
        self.events
            .iter()
            .map(|e| sample_count(SAMPLE_RATE, e.duration))
            .sum()
    }

    fn check(&self, system: &MusicalSystem) -> Result<()> {
        if self.events.is_empty() {
            return Err(Error::EmptyPlan);
        }
        for event in &self.events {
            if !(event.duration > 0.0 && event.duration.is_finite()) {
                return Err(Error::InvalidDuration(event.duration));
            }
            if let Some(note) = event.notes.iter().find(|note| note.residue >= system.n()) {
                return Err(Error::ResidueOutOfRange {
                    residue: note.residue,
                    n: system.n(),
                });
            }
            match event.kind {
                EventKind::Note if event.notes.len() != 1 => {
                    return Err(Error::InvalidWeights(format!(
                        "note event needs exactly one note, got {}",
                        event.notes.len()
                    )))
                }
                EventKind::Chord if event.notes.is_empty() => return Err(Error::EmptyChord),
                _ => {}
            }
        }
        Ok(())
    }
}

fn note_event(note: PlanNote, duration: f64) -> PlanEvent {
    PlanEvent {
        kind: EventKind::Note,
        notes: vec![note],
        duration,
        weights: None,
    }
}

fn render_note(system: &MusicalSystem, note: PlanNote, duration: f64, env: &Envelope, depth: f64) -> Result<SampleBuffer> {
    let f = note_frequency(system, i64::from(note.residue), note.octave);
    shape_note(ToneSpec::new(f, duration)?, env, depth)
}

/// Concatenates the events in order; rests are silence.
pub fn render(plan: &RenderPlan) -> Result<SampleBuffer> {
    let system = plan.system.system()?;
    plan.check(&system)?;
    let buffers = plan
        .events
        .iter()
        .map(|event| match event.kind {
            EventKind::Rest => SampleBuffer::silence(SAMPLE_RATE, event.duration),
            EventKind::Note => render_note(&system, event.notes[0], event.duration, &plan.envelope, plan.modulation_depth),
            EventKind::Chord => {
                let voices = event
                    .notes
                    .iter()
                    .map(|&note| render_note(&system, note, event.duration, &plan.envelope, plan.modulation_depth))
                    .collect::<Result<Vec<_>>>()?;
                let weights = event
                    .weights
                    .clone()
                    .unwrap_or_else(|| equal_weights(voices.len()));
                mix_chord(&voices, &weights)
            }
        })
        .collect::<Result<Vec<_>>>()?;
    SampleBuffer::concat(&buffers)
}
