//! Population container and the variation/selection operators shared by
//! both engines.
//!
//! Positions 0..4 of a population are the elites. Every operator that
//! varies genomes leaves them untouched.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::benchmarks::BenchmarkSpec;
use crate::encoding::{
    decode_genome, random_genome, Genome, BITS_PER_VARIABLE, GENOME_BITS, MAX_CODE, VARIABLES,
};
use crate::error::Error;

/// Rows in the search space.
pub const POPULATION_SIZE: usize = 40;
/// Members cloned each generation and protected from variation.
pub const ELITES: usize = 4;
/// Sizes of the five contiguous mutation bands over positions 4..40.
pub const BAND_SIZES: [usize; 5] = [8, 7, 7, 7, 7];
/// Flat per-bit mutation rates for the genetic algorithm, addressed 1..=3.
pub const GA_MUTATION_RATES: [f64; 3] = [0.005, 0.001, 0.01];

#[derive(Debug, Clone, PartialEq)]
pub struct Individual {
    pub genome: Genome,
    /// Objective value of the decoded genome; `None` until evaluated.
    pub affinity: Option<f64>,
    /// Rank (0..4) of the elite this individual was cloned from, if any.
    pub parent_rank: Option<u8>,
}

impl Individual {
    pub fn new(genome: Genome) -> Self {
        Individual {
            genome,
            affinity: None,
            parent_rank: None,
        }
    }

    pub fn is_evaluated(&self) -> bool {
        self.affinity.is_some()
    }

    fn invalidate(&mut self) {
        self.affinity = None;
    }
}

/// Exactly 40 individuals.
#[derive(Debug, Clone, PartialEq)]
pub struct Population {
    members: Vec<Individual>,
}

impl Population {
    pub fn new(members: Vec<Individual>) -> Self {
        assert_eq!(
            members.len(),
            POPULATION_SIZE,
            "population must hold {POPULATION_SIZE} members"
        );
        Population { members }
    }

    pub fn from_genomes(genomes: impl IntoIterator<Item = Genome>) -> Self {
        Population::new(genomes.into_iter().map(Individual::new).collect())
    }

    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        Population::from_genomes((0..POPULATION_SIZE).map(|_| random_genome(rng)))
    }

    pub fn members(&self) -> &[Individual] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn affinities(&self) -> impl Iterator<Item = Option<f64>> + '_ {
        self.members.iter().map(|m| m.affinity)
    }

    /// Member with the lowest affinity among evaluated members.
    pub fn best(&self) -> Option<&Individual> {
        self.members
            .iter()
            .filter(|m| m.is_evaluated())
            .min_by(|a, b| a.affinity.unwrap().total_cmp(&b.affinity.unwrap()))
    }

    pub fn mean_affinity(&self) -> Option<f64> {
        let mut sum = 0.0;
        for m in &self.members {
            sum += m.affinity?;
        }
        Some(sum / self.members.len() as f64)
    }

    fn non_elites_mut(&mut self) -> &mut [Individual] {
        &mut self.members[ELITES..]
    }
}

/// Clone counts for the four best members.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CloneSet {
    counts: [usize; ELITES],
}

impl CloneSet {
    pub const SET_1: CloneSet = CloneSet {
        counts: [15, 7, 5, 3],
    };
    pub const SET_2: CloneSet = CloneSet {
        counts: [17, 8, 5, 4],
    };
    pub const SET_3: CloneSet = CloneSet {
        counts: [18, 9, 6, 4],
    };

    pub fn new(counts: [usize; ELITES]) -> Result<Self, Error> {
        if counts.contains(&0) || counts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidParameter(format!(
                "clone counts must be positive and non-increasing, got {counts:?}"
            )));
        }
        Ok(CloneSet { counts })
    }

    /// Clone set by its 1-based index.
    pub fn by_index(index: u8) -> Result<Self, Error> {
        match index {
            1 => Ok(Self::SET_1),
            2 => Ok(Self::SET_2),
            3 => Ok(Self::SET_3),
            _ => Err(Error::InvalidParameter(format!(
                "clone set must be 1..=3, got {index}"
            ))),
        }
    }

    pub fn counts(&self) -> [usize; ELITES] {
        self.counts
    }

    pub fn total(&self) -> usize {
        self.counts.iter().sum()
    }
}

/// Five per-bit rates applied best band first.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MutationGroup {
    rates: [f64; 5],
}

impl MutationGroup {
    pub const GROUP_1: MutationGroup = MutationGroup {
        rates: [0.01, 0.02, 0.03, 0.04, 0.05],
    };
    pub const GROUP_2: MutationGroup = MutationGroup {
        rates: [0.015, 0.04, 0.065, 0.09, 0.115],
    };
    pub const GROUP_3: MutationGroup = MutationGroup {
        rates: [0.025, 0.05, 0.075, 0.1, 0.125],
    };

    /// Accepts any rates in [0, 1] that are non-decreasing.
    pub fn new(rates: [f64; 5]) -> Result<Self, Error> {
        if rates.iter().any(|r| !(0.0..=1.0).contains(r)) || rates.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::InvalidParameter(format!(
                "mutation rates must lie in [0, 1] and be ascending, got {rates:?}"
            )));
        }
        Ok(MutationGroup { rates })
    }

    pub fn by_index(index: u8) -> Result<Self, Error> {
        match index {
            1 => Ok(Self::GROUP_1),
            2 => Ok(Self::GROUP_2),
            3 => Ok(Self::GROUP_3),
            _ => Err(Error::InvalidParameter(format!(
                "mutation group must be 1..=3, got {index}"
            ))),
        }
    }

    pub fn rates(&self) -> [f64; 5] {
        self.rates
    }
}

/// Flat GA mutation rate by its 1-based index.
pub fn ga_rate_by_index(index: u8) -> Result<f64, Error> {
    GA_MUTATION_RATES
        .get((index as usize).wrapping_sub(1))
        .copied()
        .ok_or_else(|| Error::InvalidParameter(format!("GA rate index must be 1..=3, got {index}")))
}

/// Stable ascending sort by affinity. Panics on an unevaluated member.
pub fn sort_population(p: &mut Population) {
    assert!(
        p.members.iter().all(Individual::is_evaluated),
        "cannot sort a population with unevaluated members"
    );
    p.members
        .sort_by(|a, b| a.affinity.unwrap().total_cmp(&b.affinity.unwrap()));
}

/// Copies of the four best members: `counts[0]` of member 0, then
/// `counts[1]` of member 1, and so on.
pub fn clone_elites(p: &Population, set: CloneSet) -> Vec<Individual> {
    let mut clones = Vec::with_capacity(set.total());
    for (rank, &count) in set.counts.iter().enumerate() {
        let parent = &p.members[rank];
        clones.extend((0..count).map(|_| Individual {
            genome: parent.genome,
            affinity: parent.affinity,
            parent_rank: Some(rank as u8),
        }));
    }
    clones
}

/// Elites, then clones, then the best carried-over members, cut to 40.
///
/// When elites plus clones exceed 40 the trailing clones (those of the
/// worst-ranked parent) are the ones dropped.
pub fn assemble_next(previous: &Population, clones: Vec<Individual>) -> Population {
    let mut members = Vec::with_capacity(POPULATION_SIZE);
    members.extend(previous.members[..ELITES].iter().cloned().map(|mut m| {
        m.parent_rank = None;
        m
    }));
    members.extend(clones.into_iter().take(POPULATION_SIZE - ELITES));
    let room = POPULATION_SIZE - members.len();
    members.extend(previous.members[ELITES..].iter().take(room).cloned());
    Population::new(members)
}

/// Flips each bit of `genome` independently with probability `rate`.
/// Returns the number of flipped bits.
///
/// Gaps between flips are drawn from the geometric distribution, which is
/// equivalent to one Bernoulli trial per bit.
pub fn flip_bits<R: Rng + ?Sized>(genome: &mut Genome, rate: f64, rng: &mut R) -> u32 {
    if rate <= 0.0 {
        return 0;
    }
    if rate >= 1.0 {
        *genome = Genome::from_codes(genome.codes().map(|c| !c & MAX_CODE));
        return GENOME_BITS as u32;
    }
    let log_keep = (1.0 - rate).ln();
    let mut flips = 0;
    let mut pos = 0usize;
    loop {
        let u: f64 = rng.gen();
        let gap = ((1.0 - u).ln() / log_keep).floor();
        if gap >= (GENOME_BITS - pos) as f64 {
            break;
        }
        pos += gap as usize;
        genome.flip(pos);
        flips += 1;
        pos += 1;
        if pos >= GENOME_BITS {
            break;
        }
    }
    flips
}

fn mutate_member<R: Rng + ?Sized>(m: &mut Individual, rate: f64, rng: &mut R) {
    if flip_bits(&mut m.genome, rate, rng) > 0 {
        m.invalidate();
    }
}

/// Rank-banded hypermutation over positions 4..40: five contiguous bands
/// of sizes 8, 7, 7, 7, 7 take the group's rates in order.
pub fn banded_mutation<R: Rng + ?Sized>(p: &mut Population, group: MutationGroup, rng: &mut R) {
    assert_eq!(
        p.len(),
        POPULATION_SIZE,
        "population size must be {POPULATION_SIZE}"
    );
    let mut rest = p.non_elites_mut();
    for (&size, &rate) in BAND_SIZES.iter().zip(group.rates.iter()) {
        let (band, tail) = rest.split_at_mut(size);
        for m in band {
            mutate_member(m, rate, rng);
        }
        rest = tail;
    }
}

/// Per-bit mutation at a single rate over positions 4..40.
pub fn flat_mutation<R: Rng + ?Sized>(
    p: &mut Population,
    rate: f64,
    rng: &mut R,
) -> Result<(), Error> {
    if !(0.0..=1.0).contains(&rate) {
        return Err(Error::InvalidParameter(format!(
            "mutation rate must lie in [0, 1], got {rate}"
        )));
    }
    for m in p.non_elites_mut() {
        mutate_member(m, rate, rng);
    }
    Ok(())
}

/// Exchanges the tails of two genomes after column `cut` (1..=199).
pub fn single_point_crossover(
    a: &Genome,
    b: &Genome,
    cut: usize,
) -> Result<(Genome, Genome), Error> {
    if !(1..GENOME_BITS).contains(&cut) {
        return Err(Error::InvalidParameter(format!(
            "crossover cut must be in 1..={}, got {cut}",
            GENOME_BITS - 1
        )));
    }
    let (ac, bc) = (a.codes(), b.codes());
    let mut left = [0u32; VARIABLES];
    let mut right = [0u32; VARIABLES];
    for v in 0..VARIABLES {
        let start = v * BITS_PER_VARIABLE;
        // Bits of this variable that come from the head parent.
        let head = cut.saturating_sub(start).min(BITS_PER_VARIABLE);
        let tail_mask = if head == BITS_PER_VARIABLE {
            0
        } else {
            MAX_CODE >> head
        };
        left[v] = (ac[v] & !tail_mask & MAX_CODE) | (bc[v] & tail_mask);
        right[v] = (bc[v] & !tail_mask & MAX_CODE) | (ac[v] & tail_mask);
    }
    Ok((Genome::from_codes(left), Genome::from_codes(right)))
}

/// Shuffles positions 4..40, pairs them consecutively and replaces each
/// pair with its two children at a uniform cut.
pub fn pair_and_crossover<R: Rng + ?Sized>(p: &mut Population, rng: &mut R) {
    let rest = p.non_elites_mut();
    rest.shuffle(rng);
    for pair in rest.chunks_exact_mut(2) {
        let cut = rng.gen_range(1..GENOME_BITS);
        let (c1, c2) = single_point_crossover(&pair[0].genome, &pair[1].genome, cut)
            .expect("cut drawn in range");
        for (m, child) in pair.iter_mut().zip([c1, c2]) {
            m.genome = child;
            m.parent_rank = None;
            m.invalidate();
        }
    }
}

/// Copies an elite's affinity onto every unevaluated member whose genome
/// is identical to that elite. Returns how many members were restored.
pub fn reuse_elite_affinities(p: &mut Population) -> usize {
    let (elites, rest) = p.members.split_at_mut(ELITES);
    let mut restored = 0;
    for m in rest.iter_mut().filter(|m| !m.is_evaluated()) {
        if let Some(e) = elites
            .iter()
            .find(|e| e.is_evaluated() && e.genome == m.genome)
        {
            m.affinity = e.affinity;
            restored += 1;
        }
    }
    restored
}

/// Scores every unevaluated member. Returns how many objective calls were made.
pub fn evaluate_population(p: &mut Population, spec: &BenchmarkSpec) -> usize {
    let mut calls = 0;
    for m in p.members.iter_mut().filter(|m| !m.is_evaluated()) {
        let x = decode_genome(&m.genome, spec.bounds);
        m.affinity = Some(spec.evaluate(&x));
        calls += 1;
    }
    calls
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn evaluated(affinities: &[f64]) -> Population {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut p = Population::random(&mut rng);
        for (m, &a) in p.members.iter_mut().zip(affinities.iter().cycle()) {
            m.affinity = Some(a);
        }
        p
    }

    #[test]
    fn sort_orders_and_is_stable() {
        let mut p = evaluated(&[3.0, 1.0, 2.0]);
        sort_population(&mut p);
        let a: Vec<f64> = p.affinities().map(Option::unwrap).collect();
        assert!(a.windows(2).all(|w| w[0] <= w[1]));

        let mut q = evaluated(&[5.0]);
        let before = q.clone();
        sort_population(&mut q);
        assert_eq!(q, before);
    }

    #[test]
    #[should_panic]
    fn sort_rejects_unevaluated() {
        let mut p = Population::random(&mut ChaCha8Rng::seed_from_u64(0));
        sort_population(&mut p);
    }

    #[test]
    fn clone_set_table() {
        assert_eq!(CloneSet::by_index(1).unwrap().total(), 30);
        assert_eq!(CloneSet::by_index(2).unwrap().total(), 34);
        assert_eq!(CloneSet::by_index(3).unwrap().total(), 37);
        assert!(CloneSet::by_index(4).is_err());
        assert!(CloneSet::new([1, 2, 1, 1]).is_err());
        assert!(CloneSet::new([3, 0, 0, 0]).is_err());
    }

    #[test]
    fn mutation_group_table() {
        assert_eq!(
            MutationGroup::by_index(2).unwrap().rates(),
            [0.015, 0.04, 0.065, 0.09, 0.115]
        );
        assert!(MutationGroup::by_index(0).is_err());
        assert!(MutationGroup::new([0.2, 0.1, 0.3, 0.4, 0.5]).is_err());
        assert_eq!(ga_rate_by_index(2).unwrap(), 0.001);
        assert!(ga_rate_by_index(0).is_err());
        assert!(ga_rate_by_index(4).is_err());
    }

    #[test]
    fn assemble_set_1_and_set_3() {
        let mut p = evaluated(&(0..40).map(f64::from).collect::<Vec<_>>());
        sort_population(&mut p);

        let next = assemble_next(&p, clone_elites(&p, CloneSet::SET_1));
        assert_eq!(next.len(), 40);
        assert_eq!(&next.members[..4], &p.members[..4]);
        assert!(next.members[4..34].iter().all(|m| m.parent_rank.is_some()));
        assert_eq!(&next.members[34..], &p.members[4..10]);

        let next = assemble_next(&p, clone_elites(&p, CloneSet::SET_3));
        let rank3 = next
            .members
            .iter()
            .filter(|m| m.parent_rank == Some(3))
            .count();
        assert_eq!(rank3, 3);
        assert_eq!(next.members[39].parent_rank, Some(3));

        assert_eq!(assemble_next(&p, Vec::new()), p);
    }

    #[test]
    fn rate_extremes() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let p = evaluated(&[1.0]);
        let mut q = p.clone();
        flat_mutation(&mut q, 0.0, &mut rng).unwrap();
        assert_eq!(q, p);
        flat_mutation(&mut q, 1.0, &mut rng).unwrap();
        for (a, b) in p.members.iter().zip(q.members.iter()).skip(4) {
            assert_eq!(a.genome.hamming(&b.genome), 200);
            assert!(!b.is_evaluated());
        }
        assert_eq!(&q.members[..4], &p.members[..4]);
        assert!(flat_mutation(&mut q, 1.5, &mut rng).is_err());
        assert!(flat_mutation(&mut q, -0.1, &mut rng).is_err());

        let zero = MutationGroup::new([0.0; 5]).unwrap();
        let mut r = p.clone();
        banded_mutation(&mut r, zero, &mut rng);
        assert_eq!(r, p);
    }

    #[test]
    fn crossover_examples() {
        let (c1, c2) = single_point_crossover(&Genome::zeros(), &Genome::ones(), 100).unwrap();
        let s1 = c1.to_string();
        assert_eq!(s1, format!("{}{}", "0".repeat(100), "1".repeat(100)));
        assert_eq!(
            c2.to_string(),
            format!("{}{}", "1".repeat(100), "0".repeat(100))
        );

        let a = random_genome(&mut ChaCha8Rng::seed_from_u64(5));
        assert_eq!(single_point_crossover(&a, &a, 37).unwrap(), (a, a));
        assert!(single_point_crossover(&a, &a, 0).is_err());
        assert!(single_point_crossover(&a, &a, 200).is_err());
    }

    #[test]
    fn crossover_matches_bitwise_definition() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for cut in 1..200 {
            let a = random_genome(&mut rng);
            let b = random_genome(&mut rng);
            let (c1, c2) = single_point_crossover(&a, &b, cut).unwrap();
            for i in 0..200 {
                let (x, y) = if i < cut {
                    (a.bit(i), b.bit(i))
                } else {
                    (b.bit(i), a.bit(i))
                };
                assert_eq!(c1.bit(i), x, "cut {cut} bit {i}");
                assert_eq!(c2.bit(i), y, "cut {cut} bit {i}");
            }
        }
    }

    #[test]
    fn elite_affinities_are_reused_only_for_identical_genomes() {
        let mut p = evaluated(&[1.0, 2.0, 3.0, 4.0, 5.0]);
        let elite = p.members[0].genome;
        p.members[10].genome = elite;
        p.members[10].affinity = None;
        p.members[11].affinity = None;
        assert_eq!(reuse_elite_affinities(&mut p), 1);
        assert_eq!(p.members[10].affinity, Some(1.0));
        assert_eq!(p.members[11].affinity, None);
    }

    #[test]
    fn crossover_of_identical_non_elites_changes_nothing() {
        let g = random_genome(&mut ChaCha8Rng::seed_from_u64(2));
        let mut p = Population::from_genomes(std::iter::repeat_n(g, 40));
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        pair_and_crossover(&mut p, &mut rng);
        assert!(p.members.iter().all(|m| m.genome == g));
    }
}
