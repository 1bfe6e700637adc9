use std::collections::{HashMap, HashSet, VecDeque};
use std::sync::Arc;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::operators::{crossover, mutate, random_motif, tensor_pool};
use super::{EvoError, SearchConfig};
use crate::ansatz;
use crate::dsl::{instantiate, parse_motif, Motif, NetworkProgram, TensorSpec};
use crate::hamiltonian::{build, Hamiltonian};
use crate::optimize::OptimizerConfig;
use crate::sim::optimize_params;

/// Unique individuals that make up one step.
pub const UNIQUE_PER_STEP: usize = 10;
/// Offspring generated before each evaluation round. Fixed so that the
/// trajectory does not depend on the worker count.
pub const BATCH: usize = 12;
/// Rounds without a new unique individual before a random genome is injected.
const STALL_ROUNDS: usize = 50;

/// Sum of tensor ranks over all steps, divided by 2n.
pub fn structural_complexity(prog: &NetworkProgram) -> f64 {
    prog.total_rank() as f64 / (2 * prog.n) as f64
}

pub fn variational_complexity(prog: &NetworkProgram) -> usize {
    prog.num_params
}

/// Contestants per tournament: ceil(rho * pool), at least 2.
pub fn contestant_count(rho: f64, pool: usize) -> usize {
    ((rho * pool as f64).ceil() as usize).max(2).min(pool)
}

/// Optimiser seed for one (search seed, genome, size) triple.
pub fn genome_seed(seed: u64, canonical: &str, n: usize) -> u64 {
    let mut h = Sha256::new();
    h.update(seed.to_le_bytes());
    h.update(canonical.as_bytes());
    h.update((n as u64).to_le_bytes());
    let d = h.finalize();
    u64::from_le_bytes(d[..8].try_into().expect("8 bytes"))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SizeRecord {
    pub n: usize,
    #[serde(rename = "E")]
    pub energy: f64,
    #[serde(rename = "S")]
    pub structural: f64,
    #[serde(rename = "V")]
    pub variational: usize,
}

/// Weighted penalised fitness for cached per-size records.
pub fn fitness_from_records(records: &[SizeRecord], weights: &[f64], l1: f64, l2: f64) -> f64 {
    records
        .iter()
        .zip(weights)
        .map(|(r, w)| (r.energy + l1 * r.structural + l2 * r.variational as f64) * w)
        .sum()
}

/// Result of evaluating one genome: `None` means culled.
pub type Evaluation = Option<(f64, Vec<SizeRecord>)>;

/// Optimise the genome at every configured size. Pure in (genome, config).
pub fn evaluate_genome(genome: &Motif, cfg: &SearchConfig, hams: &[Hamiltonian]) -> Evaluation {
    if genome.primitives().len() > cfg.max_primitives {
        return None;
    }
    let canonical = genome.canonical();
    let mut records = Vec::with_capacity(cfg.sizes.len());
    for (&n, ham) in cfg.sizes.iter().zip(hams) {
        let prog = instantiate(genome, n).ok()?;
        let opt = OptimizerConfig {
            seed: genome_seed(cfg.seed, &canonical, n),
            ..cfg.optimizer.clone()
        };
        let res = optimize_params(&prog, ham, &opt).ok()?;
        if !res.value.is_finite() {
            return None;
        }
        records.push(SizeRecord {
            n,
            energy: res.value,
            structural: structural_complexity(&prog),
            variational: variational_complexity(&prog),
        });
    }
    let f = fitness_from_records(&records, &cfg.normalized_weights(), cfg.l1, cfg.l2);
    f.is_finite().then_some((f, records))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Individual {
    pub genome: Motif,
    pub fitness: Option<f64>,
    pub per_size: Option<Vec<SizeRecord>>,
    pub multiplicity: usize,
}

impl Individual {
    pub fn unevaluated(genome: Motif) -> Self {
        Individual {
            genome,
            fitness: None,
            per_size: None,
            multiplicity: 1,
        }
    }

    fn evaluated(genome: Motif, fitness: f64, per_size: Vec<SizeRecord>) -> Self {
        Individual {
            genome,
            fitness: Some(fitness),
            per_size: Some(per_size),
            multiplicity: 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum StructureClass {
    White,
    Red,
    Green,
    Blue,
    Yellow,
    Pink,
}

impl StructureClass {
    pub const ALL: [StructureClass; 6] = [
        StructureClass::White,
        StructureClass::Red,
        StructureClass::Green,
        StructureClass::Blue,
        StructureClass::Yellow,
        StructureClass::Pink,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            StructureClass::White => "White",
            StructureClass::Red => "Red",
            StructureClass::Green => "Green",
            StructureClass::Blue => "Blue",
            StructureClass::Yellow => "Yellow",
            StructureClass::Pink => "Pink",
        }
    }
}

/// What individuals are classified against: the reference ansatz and the
/// mean-field product state.
#[derive(Debug, Clone)]
pub struct Reference {
    original: String,
    mean_field: String,
    original_parts: Vec<String>,
    structural: HashMap<usize, f64>,
}

fn part_texts(m: &Motif) -> Vec<String> {
    m.primitives()
        .into_iter()
        .map(|p| Motif::from_primitives([p]).canonical())
        .collect()
}

impl Reference {
    pub fn new(sizes: &[usize]) -> Self {
        let o = ansatz::original();
        let structural = sizes
            .iter()
            .map(|&n| {
                let p = instantiate(&o, n).expect("reference instantiates");
                (n, structural_complexity(&p))
            })
            .collect();
        Reference {
            original: o.canonical(),
            mean_field: ansatz::mean_field().canonical(),
            original_parts: part_texts(&o),
            structural,
        }
    }
}

/// Class of an evaluated individual relative to the reference ansatz.
pub fn classify(ind: &Individual, reference: &Reference) -> Result<StructureClass, EvoError> {
    let per_size = ind.per_size.as_ref().ok_or(EvoError::NotEvaluated)?;
    let canonical = ind.genome.canonical();
    if canonical == reference.original {
        return Ok(StructureClass::White);
    }
    if canonical == reference.mean_field {
        return Ok(StructureClass::Red);
    }
    const EPS: f64 = 1e-12;
    let pairs: Vec<(f64, f64)> = per_size
        .iter()
        .map(|r| {
            let s_ref = reference.structural.get(&r.n).copied().unwrap_or(3.0);
            (r.structural, s_ref)
        })
        .collect();
    if pairs.iter().all(|(s, r)| *s < r - EPS) {
        return Ok(StructureClass::Green);
    }
    if pairs.iter().all(|(s, r)| (s - r).abs() <= EPS) {
        return Ok(StructureClass::Blue);
    }
    let larger = pairs.iter().all(|(s, r)| *s >= r - EPS) && pairs.iter().any(|(s, r)| *s > r + EPS);
    let parts = part_texts(&ind.genome);
    let k = reference.original_parts.len();
    let contains = parts.windows(k).any(|w| w == reference.original_parts.as_slice());
    Ok(if larger && contains {
        StructureClass::Yellow
    } else {
        StructureClass::Pink
    })
}

/// One line of the search log.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StepRecord {
    pub step: usize,
    pub best_fitness: f64,
    pub best_class: StructureClass,
    pub pool_unique: usize,
    pub wallclock_s: f64,
}

/// One line of a pool snapshot.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Snapshot {
    pub genome: String,
    pub fitness: f64,
    pub per_size: Vec<SizeRecord>,
    pub multiplicity: usize,
    pub class: StructureClass,
}

/// Orchestrator state: pool of evaluated individuals, queue of pending ones.
pub struct Search {
    cfg: SearchConfig,
    hams: Vec<Hamiltonian>,
    tensors: Vec<Arc<TensorSpec>>,
    reference: Reference,
    rng: ChaCha8Rng,
    pool: Vec<Individual>,
    index: HashMap<String, usize>,
    queue: VecDeque<Motif>,
    cache: HashMap<String, (f64, Vec<SizeRecord>)>,
    culled: HashSet<String>,
    evaluations: usize,
    unique_added: usize,
    step_count: usize,
    stalled: usize,
    history: Vec<StepRecord>,
    started: std::time::Instant,
}

impl Search {
    /// Validate the config and seed the pool with random genomes.
    pub fn new(cfg: SearchConfig) -> Result<Self, EvoError> {
        cfg.validate()?;
        let hams = cfg
            .sizes
            .iter()
            .map(|&n| build(cfg.model, n, cfg.j, cfg.h))
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| EvoError::Config(e.to_string()))?;
        let mut s = Search {
            hams,
            tensors: tensor_pool(cfg.operator_basis),
            reference: Reference::new(&cfg.sizes),
            rng: ChaCha8Rng::seed_from_u64(cfg.seed),
            pool: Vec::new(),
            index: HashMap::new(),
            queue: VecDeque::new(),
            cache: HashMap::new(),
            culled: HashSet::new(),
            evaluations: 0,
            unique_added: 0,
            step_count: 0,
            stalled: 0,
            history: Vec::new(),
            started: std::time::Instant::now(),
            cfg,
        };
        s.seed_pool()?;
        Ok(s)
    }

    fn seed_pool(&mut self) -> Result<(), EvoError> {
        let target = self.cfg.pool_seed_count;
        let limit = 50 * target;
        let mut drawn = 0;
        while self.pool.len() < target {
            if drawn >= limit {
                return Err(EvoError::SeedingFailed(drawn));
            }
            let need = target - self.pool.len();
            let batch: Vec<Motif> = (0..need)
                .map(|_| random_motif(&self.tensors, 1, 3, &mut self.rng))
                .collect();
            drawn += batch.len();
            self.queue.extend(batch);
            self.evaluate_queue();
            while let Some(g) = self.queue.pop_front() {
                if self.pool.len() < target {
                    self.merge(g);
                }
            }
        }
        Ok(())
    }

    pub fn config(&self) -> &SearchConfig {
        &self.cfg
    }

    pub fn reference(&self) -> &Reference {
        &self.reference
    }

    pub fn pool(&self) -> &[Individual] {
        &self.pool
    }

    pub fn queue_len(&self) -> usize {
        self.queue.len()
    }

    pub fn step_count(&self) -> usize {
        self.step_count
    }

    /// Unique individuals that joined the pool after seeding.
    pub fn unique_added(&self) -> usize {
        self.unique_added
    }

    /// Individuals whose evaluation was looked up or run, culled excluded.
    pub fn evaluations(&self) -> usize {
        self.evaluations
    }

    pub fn history(&self) -> &[StepRecord] {
        &self.history
    }

    /// Pool index of the fittest individual; ties go to the earlier entry.
    pub fn best_index(&self) -> usize {
        let mut best = 0;
        for (i, ind) in self.pool.iter().enumerate() {
            if ind.fitness < self.pool[best].fitness {
                best = i;
            }
        }
        best
    }

    pub fn best(&self) -> &Individual {
        &self.pool[self.best_index()]
    }

    pub fn class_of(&self, ind: &Individual) -> StructureClass {
        classify(ind, &self.reference).expect("pool entries are evaluated")
    }

    /// Evaluate every queued genome not seen before, in parallel.
    fn evaluate_queue(&mut self) {
        let mut fresh: Vec<(String, Motif)> = Vec::new();
        let mut seen = HashSet::new();
        for g in &self.queue {
            let c = g.canonical();
            if !self.index.contains_key(&c)
                && !self.cache.contains_key(&c)
                && !self.culled.contains(&c)
                && seen.insert(c.clone())
            {
                fresh.push((c, g.clone()));
            }
        }
        fresh.sort_by(|a, b| a.0.cmp(&b.0));
        let (cfg, hams) = (&self.cfg, &self.hams);
        let results: Vec<(String, Evaluation)> = fresh
            .into_par_iter()
            .map(|(c, g)| {
                let e = evaluate_genome(&g, cfg, hams);
                (c, e)
            })
            .collect();
        for (c, e) in results {
            match e {
                Some(v) => {
                    self.cache.insert(c, v);
                }
                None => {
                    self.culled.insert(c);
                }
            }
        }
    }

    /// Fold one evaluated genome into the pool. Returns true if it was new.
    fn merge(&mut self, genome: Motif) -> bool {
        let c = genome.canonical();
        if let Some(&i) = self.index.get(&c) {
            self.pool[i].multiplicity += 1;
            self.evaluations += 1;
            return false;
        }
        if self.culled.contains(&c) {
            return false;
        }
        let Some((f, per_size)) = self.cache.remove(&c) else {
            return false;
        };
        self.evaluations += 1;
        self.index.insert(c, self.pool.len());
        self.pool.push(Individual::evaluated(genome, f, per_size));
        true
    }

    /// Two winners of one tournament, as pool indices.
    pub fn tournament(&mut self) -> Result<(usize, usize), EvoError> {
        let size = self.pool.len();
        if size < 2 {
            return Err(EvoError::NeedMoreIndividuals(size));
        }
        let k = contestant_count(self.cfg.rho, size);
        let mut contestants = sample(&mut self.rng, size, k).into_vec();
        if self.rng.gen_bool(self.cfg.epsilon) {
            let pick = sample(&mut self.rng, k, 2);
            return Ok((contestants[pick.index(0)], contestants[pick.index(1)]));
        }
        contestants.sort_by(|&a, &b| {
            let fa = self.pool[a].fitness.unwrap_or(f64::INFINITY);
            let fb = self.pool[b].fitness.unwrap_or(f64::INFINITY);
            fa.total_cmp(&fb).then(a.cmp(&b))
        });
        Ok((contestants[0], contestants[1]))
    }

    /// Two mutants and one crossover child of a tournament's winners.
    fn breed(&mut self) -> Result<(), EvoError> {
        let (a, b) = self.tournament()?;
        let ga = self.pool[a].genome.clone();
        let gb = self.pool[b].genome.clone();
        let kids = [
            mutate(&ga, &self.tensors, &mut self.rng),
            mutate(&gb, &self.tensors, &mut self.rng),
            crossover(&ga, &gb, &mut self.rng),
        ];
        self.queue.extend(kids);
        Ok(())
    }

    /// Run until ten new unique individuals joined the pool.
    pub fn step(&mut self) -> Result<&StepRecord, EvoError> {
        let mut added = 0;
        while added < UNIQUE_PER_STEP {
            while self.queue.len() < BATCH {
                self.breed()?;
            }
            if self.stalled >= STALL_ROUNDS {
                let g = random_motif(&self.tensors, 1, 3, &mut self.rng);
                self.queue.push_front(g);
                self.stalled = 0;
            }
            self.evaluate_queue();
            let before = added;
            while added < UNIQUE_PER_STEP {
                let Some(g) = self.queue.pop_front() else { break };
                if self.merge(g) {
                    added += 1;
                }
            }
            self.stalled = if added == before { self.stalled + 1 } else { 0 };
        }
        self.unique_added += added;
        self.step_count = self.unique_added / UNIQUE_PER_STEP;
        let best = self.best();
        let record = StepRecord {
            step: self.step_count,
            best_fitness: best.fitness.expect("evaluated"),
            best_class: self.class_of(best),
            pool_unique: self.pool.len(),
            wallclock_s: self.started.elapsed().as_secs_f64(),
        };
        self.history.push(record);
        Ok(self.history.last().expect("just pushed"))
    }

    /// Run the configured number of steps, reporting each.
    pub fn run(&mut self, mut on_step: impl FnMut(&StepRecord)) -> Result<(), EvoError> {
        for _ in 0..self.cfg.budget_steps {
            let r = self.step()?;
            on_step(r);
        }
        Ok(())
    }

    pub fn snapshot(&self) -> Vec<Snapshot> {
        self.pool
            .iter()
            .map(|ind| Snapshot {
                genome: ind.genome.canonical(),
                fitness: ind.fitness.expect("evaluated"),
                per_size: ind.per_size.clone().expect("evaluated"),
                multiplicity: ind.multiplicity,
                class: self.class_of(ind),
            })
            .collect()
    }

    /// Pool snapshot as JSON lines, in insertion order.
    pub fn snapshot_jsonl(&self) -> String {
        self.snapshot()
            .iter()
            .map(|s| serde_json::to_string(s).expect("serialisable") + "\n")
            .collect()
    }
}

impl Snapshot {
    pub fn motif(&self) -> Result<Motif, crate::dsl::DslError> {
        parse_motif(&self.genome)
    }
}
