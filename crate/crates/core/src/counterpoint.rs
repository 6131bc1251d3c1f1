//! Consonant/dissonant dichotomies and the exhaustive searches behind them.
//!
//! A strong witness for a partition `(K, D)` of `Z_n` is an affine map `T`
//! with `T² = Id`, `T(K) = D`, isometric on the unoriented Cayley graph. A
//! weak witness only asks `T(K') ∩ K' = ∅` for `K' = {0} ∪ S`. Searches scan
//! every affine map in `(multiplier, offset)` order; isometry is decided by
//! the generator-preservation criterion.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::cayley::{is_isometry_by_generators, CayleyGraph, GeneratorSet};
use crate::error::{Error, Result};
use crate::modular::{affine_maps, units, AffineMap, Automorphism, ModRing};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Dichotomy {
    n: u32,
    #[serde(rename = "K")]
    consonant: BTreeSet<u32>,
    #[serde(rename = "D")]
    dissonant: BTreeSet<u32>,
}

impl Dichotomy {
    pub fn new(
        ring: ModRing,
        consonant: impl IntoIterator<Item = u32>,
        dissonant: impl IntoIterator<Item = u32>,
    ) -> Result<Self> {
        let n = ring.modulus();
        let check = |set: BTreeSet<u32>| -> Result<BTreeSet<u32>> {
            match set.iter().find(|&&x| x >= n) {
                Some(&residue) => Err(Error::ResidueOutOfRange { residue, n }),
                None => Ok(set),
            }
        };
        let consonant = check(consonant.into_iter().collect())?;
        let dissonant = check(dissonant.into_iter().collect())?;
        if let Some(&x) = consonant.intersection(&dissonant).next() {
            return Err(Error::OverlappingDichotomy(x));
        }
        Ok(Self {
            n,
            consonant,
            dissonant,
        })
    }

    /// `(K, Z_n ∖ K)`.
    pub fn from_consonant(ring: ModRing, consonant: impl IntoIterator<Item = u32>) -> Result<Self> {
        let consonant: BTreeSet<u32> = consonant.into_iter().collect();
        let dissonant: Vec<u32> = (0..ring.modulus())
            .filter(|x| !consonant.contains(x))
            .collect();
        Self::new(ring, consonant, dissonant)
    }

    /// `K = {0, 3, 4, 7, 8, 9}` in `Z_12`.
    pub fn fux() -> Self {
        let ring = ModRing::new(12).expect("12 ≥ 2");
        Self::from_consonant(ring, [0, 3, 4, 7, 8, 9]).expect("valid residues")
    }

    pub fn ring(&self) -> ModRing {
        ModRing::new(self.n).expect("validated at construction")
    }

    pub fn consonant(&self) -> &BTreeSet<u32> {
        &self.consonant
    }

    pub fn dissonant(&self) -> &BTreeSet<u32> {
        &self.dissonant
    }

    pub fn is_partition(&self) -> bool {
        self.consonant.len() + self.dissonant.len() == self.n as usize
    }
}

/// `K' = {0} ∪ S` for a symmetric generating `S`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KPrime {
    generators: GeneratorSet,
    set: BTreeSet<u32>,
}

impl KPrime {
    pub fn new(generators: GeneratorSet) -> Result<Self> {
        generators.require_symmetric_generating()?;
        let set = std::iter::once(0)
            .chain(generators.elements().iter().copied())
            .collect();
        Ok(Self { generators, set })
    }

    pub fn generators(&self) -> &GeneratorSet {
        &self.generators
    }

    pub fn set(&self) -> &BTreeSet<u32> {
        &self.set
    }

    pub fn ring(&self) -> ModRing {
        self.generators.ring()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Condition {
    Strong,
    Weak,
}

/// An affine map together with the condition it was found to satisfy.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CounterpointWitness {
    pub map: AffineMap,
    pub condition: Condition,
    /// The partition for strong witnesses; `(K', T(K'))` for weak ones.
    pub dichotomy: Dichotomy,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct MapRecord {
    pub h: u32,
    pub w: u32,
}

impl From<AffineMap> for MapRecord {
    fn from(t: AffineMap) -> Self {
        Self {
            h: t.multiplier(),
            w: t.offset(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PartitionRecord {
    #[serde(rename = "K")]
    pub consonant: Vec<u32>,
    #[serde(rename = "D")]
    pub dissonant: Vec<u32>,
    pub h: u32,
    pub w: u32,
    /// Affine maps satisfying the strong condition for this `(K, D)`; zero
    /// when `(K, D)` does not cover the ring.
    pub strong_witness_count: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SearchReport {
    pub n: u32,
    #[serde(rename = "S")]
    pub generators: Vec<u32>,
    pub examined: usize,
    pub witnesses: Vec<MapRecord>,
    pub partitions: Vec<PartitionRecord>,
    pub notes: Vec<String>,
}

impl SearchReport {
    fn empty(generators: &GeneratorSet) -> Self {
        Self {
            n: generators.ring().modulus(),
            generators: generators.elements().to_vec(),
            examined: 0,
            witnesses: Vec::new(),
            partitions: Vec::new(),
            notes: Vec::new(),
        }
    }

    /// Orders witnesses by `(h, w)` and partitions by `(h, w, K)`.
    pub fn sort(&mut self) {
        self.witnesses.sort_unstable();
        self.partitions
            .sort_by(|a, b| (a.h, a.w, &a.consonant).cmp(&(b.h, b.w, &b.consonant)));
    }
}

fn check_ring(left: ModRing, right: ModRing) -> Result<()> {
    if left != right {
        return Err(Error::ModulusMismatch {
            left: left.modulus(),
            right: right.modulus(),
        });
    }
    Ok(())
}

fn preserves(t: AffineMap, generators: &GeneratorSet) -> Result<bool> {
    is_isometry_by_generators(t.linear_part(), generators)
}

/// `T² = Id`, `T(K) = D` and `T` isometric.
pub fn satisfies_strong(t: AffineMap, dichotomy: &Dichotomy, graph: &CayleyGraph) -> Result<bool> {
    check_ring(t.ring(), dichotomy.ring())?;
    check_ring(t.ring(), graph.ring())?;
    if !dichotomy.is_partition() {
        return Err(Error::NotAPartition(dichotomy.n));
    }
    let generators = graph.metric_generators();
    Ok(t.is_involution()
        && t.image(&dichotomy.consonant)
            .iter()
            .eq(dichotomy.dissonant.iter())
        && preserves(t, &generators)?)
}

/// `T² = Id`, `T` isometric and `T(K') ∩ K' = ∅`.
pub fn satisfies_weak(t: AffineMap, kprime: &KPrime, graph: &CayleyGraph) -> Result<bool> {
    check_ring(t.ring(), kprime.ring())?;
    check_ring(t.ring(), graph.ring())?;
    Ok(t.is_involution()
        && preserves(t, &graph.metric_generators())?
        && kprime.set.iter().all(|&x| !kprime.set.contains(&t.apply_raw(x))))
}

/// `{ a ⊕ b : a ∈ A, b ∈ B }`.
pub fn sumset(ring: ModRing, a: &BTreeSet<u32>, b: &BTreeSet<u32>) -> BTreeSet<u32> {
    a.iter()
        .flat_map(|&x| b.iter().map(move |&y| ring.add_raw(x, y)))
        .collect()
}

/// Every affine map satisfying the strong condition for `dichotomy`.
pub fn find_affine_for_partition(dichotomy: &Dichotomy, graph: &CayleyGraph) -> Result<Vec<AffineMap>> {
    check_ring(dichotomy.ring(), graph.ring())?;
    if !dichotomy.is_partition() {
        return Err(Error::NotAPartition(dichotomy.n));
    }
    let generators = graph.metric_generators();
    generators.require_symmetric_generating()?;
    Ok(isometric_involutions(&generators)
        .into_iter()
        .filter(|t| t.image(&dichotomy.consonant).iter().eq(dichotomy.dissonant.iter()))
        .collect())
}

/// Affine involutions whose linear part preserves the generators, in
/// `(h, w)` order.
fn isometric_involutions(generators: &GeneratorSet) -> Vec<AffineMap> {
    let isometric = isometric_multipliers(generators);
    affine_maps(generators.ring())
        .filter(|t| isometric.contains(&t.multiplier()) && t.is_involution())
        .collect()
}

/// Number of `candidates` mapping `K` onto its complement.
fn count_swaps(candidates: &[AffineMap], consonant: &BTreeSet<u32>, n: u32) -> usize {
    if consonant.len() * 2 != n as usize {
        return 0;
    }
    let mut member = vec![false; n as usize];
    for &k in consonant {
        member[k as usize] = true;
    }
    candidates
        .iter()
        .filter(|t| consonant.iter().all(|&k| !member[t.apply_raw(k) as usize]))
        .count()
}

/// Strong-condition scan packaged as a report.
pub fn strong_search(dichotomy: &Dichotomy, graph: &CayleyGraph) -> Result<SearchReport> {
    let maps = find_affine_for_partition(dichotomy, graph)?;
    let generators = graph.metric_generators();
    let mut report = SearchReport::empty(&generators);
    report.examined = units(dichotomy.ring()).len() * dichotomy.n as usize;
    report.witnesses = maps.iter().copied().map(MapRecord::from).collect();
    report.partitions = maps
        .iter()
        .map(|&t| PartitionRecord {
            consonant: dichotomy.consonant.iter().copied().collect(),
            dissonant: dichotomy.dissonant.iter().copied().collect(),
            h: t.multiplier(),
            w: t.offset(),
            strong_witness_count: maps.len(),
        })
        .collect();
    if maps.len() == 1 {
        report.notes.push(format!("unique strong witness {}", maps[0]));
    }
    Ok(report)
}

fn isometric_multipliers(generators: &GeneratorSet) -> Vec<u32> {
    units(generators.ring())
        .into_iter()
        .filter(|&h| {
            let f = Automorphism::new(generators.ring(), i64::from(h)).expect("unit");
            generators.elements().iter().all(|&s| generators.contains(f.apply_raw(s)))
        })
        .collect()
}

fn weak_scan(kprime: &KPrime) -> (Vec<AffineMap>, usize) {
    let ring = kprime.ring();
    let isometric = isometric_multipliers(&kprime.generators);
    let mut examined = 0;
    let mut found = Vec::new();
    for t in affine_maps(ring) {
        examined += 1;
        if isometric.contains(&t.multiplier())
            && t.is_involution()
            && kprime.set.iter().all(|&x| !kprime.set.contains(&t.apply_raw(x)))
        {
            found.push(t);
        }
    }
    (found, examined)
}

fn fmt_set<'a>(set: impl IntoIterator<Item = &'a u32>) -> String {
    let items: Vec<String> = set.into_iter().map(u32::to_string).collect();
    format!("{{{}}}", items.join(","))
}

/// Scans all `|U(n)|·n` affine maps for weak witnesses and cross-checks the
/// sumset criterion: `(n − 1)x ⊕ w` must be a witness for `w ∉ K' ⊕ K'`.
pub fn enumerate_weak_witnesses(kprime: &KPrime) -> SearchReport {
    let ring = kprime.ring();
    let (found, examined) = weak_scan(kprime);
    let mut report = SearchReport::empty(&kprime.generators);
    report.examined = examined;
    report.witnesses = found.iter().copied().map(MapRecord::from).collect();

    let sums = sumset(ring, &kprime.set, &kprime.set);
    let outside: Vec<u32> = (0..ring.modulus()).filter(|w| !sums.contains(w)).collect();
    report.notes.push(format!("K'+K' = {}", fmt_set(&sums)));
    let negation = ring.modulus() - 1;
    let missing: Vec<u32> = outside
        .iter()
        .copied()
        .filter(|&w| !found.iter().any(|t| t.multiplier() == negation && t.offset() == w))
        .collect();
    if missing.is_empty() {
        report.notes.push(format!(
            "sumset filter: {}x+w is a witness for every w outside K'+K' {}",
            negation,
            fmt_set(&outside)
        ));
    } else {
        report.notes.push(format!(
            "sumset filter violated: {}x+w fails for w in {}",
            negation,
            fmt_set(&missing)
        ));
    }
    for t in &found {
        let fixed = t.fixed_points();
        if !fixed.is_empty() {
            report
                .notes
                .push(format!("{t} has fixed points {}", fmt_set(&fixed)));
        }
    }
    report
}

/// Ascending residues that may join `K'` under `t`: outside `K' ∪ T(K')`.
fn free_candidates(kprime: &KPrime, t: AffineMap) -> Vec<u32> {
    (0..kprime.ring().modulus())
        .filter(|z| !kprime.set.contains(z) && !kprime.set.contains(&t.apply_raw(*z)))
        .collect()
}

fn choose_extensions(
    t: AffineMap,
    candidates: &[u32],
    start: usize,
    need: usize,
    taken: &mut Vec<bool>,
    chosen: &mut Vec<u32>,
    out: &mut Vec<Vec<u32>>,
) {
    if chosen.len() == need {
        out.push(chosen.clone());
        return;
    }
    if candidates.len() - start < need - chosen.len() {
        return;
    }
    for i in start..candidates.len() {
        let z = candidates[i];
        let image = t.apply_raw(z);
        if image == z || taken[image as usize] {
            continue;
        }
        taken[z as usize] = true;
        chosen.push(z);
        choose_extensions(t, candidates, i + 1, need, taken, chosen, out);
        chosen.pop();
        taken[z as usize] = false;
    }
}

/// For each weak witness `T`, every `K ⊇ K'` with `|K| = n/2` and
/// `T(K) = Z_n ∖ K`. Each distinct partition records how many affine maps
/// satisfy the strong condition for it.
pub fn extend_to_partitions(kprime: &KPrime, graph: &CayleyGraph) -> Result<SearchReport> {
    let ring = kprime.ring();
    check_ring(ring, graph.ring())?;
    let n = ring.modulus();
    if n % 2 == 1 {
        return Err(Error::OddModulus(n));
    }
    let (found, examined) = weak_scan(kprime);
    let mut report = SearchReport::empty(&kprime.generators);
    report.examined = examined;
    report.witnesses = found.iter().copied().map(MapRecord::from).collect();

    let half = n as usize / 2;
    if kprime.set.len() > half {
        report
            .notes
            .push(format!("|K'| = {} exceeds n/2 = {half}", kprime.set.len()));
        return Ok(report);
    }
    let need = half - kprime.set.len();
    let involutions = isometric_involutions(&graph.metric_generators());
    let mut seen: BTreeSet<Vec<u32>> = BTreeSet::new();
    for &t in &found {
        let fixed = t.fixed_points();
        if !fixed.is_empty() {
            report
                .notes
                .push(format!("{t} skipped: fixed points {}", fmt_set(&fixed)));
            continue;
        }
        let candidates = free_candidates(kprime, t);
        let mut taken = vec![false; n as usize];
        for &k in &kprime.set {
            taken[k as usize] = true;
        }
        let mut extensions = Vec::new();
        choose_extensions(t, &candidates, 0, need, &mut taken, &mut Vec::new(), &mut extensions);
        for extra in extensions {
            let consonant: BTreeSet<u32> = kprime.set.iter().copied().chain(extra).collect();
            let dichotomy = Dichotomy::from_consonant(ring, consonant.iter().copied())?;
            debug_assert!(t.image(&consonant).iter().eq(dichotomy.dissonant.iter()));
            let key: Vec<u32> = consonant.into_iter().collect();
            if !seen.insert(key.clone()) {
                continue;
            }
            let strong = count_swaps(&involutions, &dichotomy.consonant, n);
            report.partitions.push(PartitionRecord {
                consonant: key,
                dissonant: dichotomy.dissonant.iter().copied().collect(),
                h: t.multiplier(),
                w: t.offset(),
                strong_witness_count: strong,
            });
        }
    }
    Ok(report)
}

/// All maximal `K ⊇ K'` with `T(K) ∩ K = ∅` for a weak witness `T`. Fixed
/// points of `T` can never join `K`.
pub fn maximal_consonant_extension(
    kprime: &KPrime,
    t: AffineMap,
    graph: &CayleyGraph,
) -> Result<SearchReport> {
    maximal_consonant_extension_limited(kprime, t, graph, None)
}

/// As [`maximal_consonant_extension`], stopping after `limit` sets.
pub fn maximal_consonant_extension_limited(
    kprime: &KPrime,
    t: AffineMap,
    graph: &CayleyGraph,
    limit: Option<usize>,
) -> Result<SearchReport> {
    let ring = kprime.ring();
    if !satisfies_weak(t, kprime, graph)? {
        return Err(Error::NotAWeakWitness(t.to_string()));
    }
    let mut report = SearchReport::empty(&kprime.generators);
    report.examined = 1;
    report.witnesses.push(t.into());

    let fixed = t.fixed_points();
    if !fixed.is_empty() {
        report
            .notes
            .push(format!("fixed points excluded: {}", fmt_set(&fixed)));
    }
    // T is an involution, so the free residues split into 2-cycles and a
    // maximal K takes exactly one residue from each.
    let pairs: Vec<(u32, u32)> = free_candidates(kprime, t)
        .into_iter()
        .filter_map(|z| {
            let image = t.apply_raw(z);
            (z < image).then_some((z, image))
        })
        .collect();
    report
        .notes
        .push(format!("{0} free pair(s), 2^{0} maximal set(s)", pairs.len()));

    let total = 1usize.checked_shl(pairs.len() as u32).unwrap_or(usize::MAX);
    let count = limit.map_or(total, |l| l.min(total));
    if count < total {
        report.notes.push(format!("truncated to {count} set(s)"));
    }
    let involutions = isometric_involutions(&graph.metric_generators());
    for mask in 0..count {
        // bit i clear picks the smaller residue of pair i
        let extra = pairs.iter().enumerate().map(|(i, &(lo, hi))| {
            let bit = pairs.len() - 1 - i;
            if bit < usize::BITS as usize && (mask >> bit) & 1 == 1 {
                hi
            } else {
                lo
            }
        });
        let consonant: BTreeSet<u32> = kprime.set.iter().copied().chain(extra).collect();
        let dissonant = t.image(&consonant);
        let strong = count_swaps(&involutions, &consonant, ring.modulus());
        report.partitions.push(PartitionRecord {
            consonant: consonant.into_iter().collect(),
            dissonant,
            h: t.multiplier(),
            w: t.offset(),
            strong_witness_count: strong,
        });
    }
    Ok(report)
}

/// Picks the partition whose additions to `K'` have the smallest total
/// oriented path length from 0.
pub fn minimal_oriented_refinement(
    partitions: &[PartitionRecord],
    kprime: &KPrime,
    oriented: &CayleyGraph,
) -> Result<Dichotomy> {
    let ring = kprime.ring();
    check_ring(ring, oriented.ring())?;
    let mut best: Option<u32> = None;
    let mut ties: Vec<&PartitionRecord> = Vec::new();
    for record in partitions {
        let mut cost = 0;
        for &z in record.consonant.iter().filter(|z| !kprime.set.contains(z)) {
            cost += oriented.oriented_path_length(0, z)?;
        }
        match best {
            Some(b) if cost > b => {}
            Some(b) if cost == b => ties.push(record),
            _ => {
                best = Some(cost);
                ties = vec![record];
            }
        }
    }
    match ties.as_slice() {
        [] => Err(Error::NoPartitions),
        [only] => Dichotomy::new(ring, only.consonant.iter().copied(), only.dissonant.iter().copied()),
        many => Err(Error::AmbiguousRefinement(
            many.iter().map(|r| r.consonant.clone()).collect(),
        )),
    }
}

impl CounterpointWitness {
    pub fn strong(map: AffineMap, dichotomy: &Dichotomy, graph: &CayleyGraph) -> Result<Option<Self>> {
        Ok(satisfies_strong(map, dichotomy, graph)?.then(|| Self {
            map,
            condition: Condition::Strong,
            dichotomy: dichotomy.clone(),
        }))
    }

    pub fn weak(map: AffineMap, kprime: &KPrime, graph: &CayleyGraph) -> Result<Option<Self>> {
        if !satisfies_weak(map, kprime, graph)? {
            return Ok(None);
        }
        let dichotomy = Dichotomy::new(kprime.ring(), kprime.set.iter().copied(), map.image(&kprime.set))?;
        Ok(Some(Self {
            map,
            condition: Condition::Weak,
            dichotomy,
        }))
    }
}
