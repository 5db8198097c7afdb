//! Successive-cancellation (SC), list (SCL), and coset-aggregating (SCL-C)
//! syndrome decoders for X-type errors on the constructed CSS codes.
//!
//! Decoding works on the all-zero received-word reduction: the error `e` has
//! i.i.d. Bernoulli(q) bits, `u = eG`, the syndrome fixes `u` on the Z-frozen
//! set, and every position carries the uniform prior LLR `ln((1-q)/q)`. The
//! decoder estimates `u` position by position in natural order; X-frozen
//! positions are unknown to it and branch exactly like information bits.
//!
//! The list engine keeps per-stage LLR and partial-sum arrays in
//! reference-counted pools with copy-on-write cloning, so a decode costs
//! `O(L N log N)`. LLR updates use the exact log-domain f/g recursions (no
//! min-sum approximation), which keeps path metrics equal to coset-prefix
//! log-probabilities up to a path-independent constant.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::polar::{polar_transform, BitVector};

/// Exact check-node update `f(a,b) = 2 atanh(tanh(a/2) tanh(b/2))`.
#[inline]
fn f_llr(a: f64, b: f64) -> f64 {
    let sign = if (a < 0.0) ^ (b < 0.0) { -1.0 } else { 1.0 };
    let (aa, ab) = (a.abs(), b.abs());
    let (mn, mx) = if aa < ab { (aa, ab) } else { (ab, aa) };
    sign * (mn + (-(mx + mn)).exp().ln_1p() - (-(mx - mn)).exp().ln_1p())
}

/// Variable-node update `g(a,b,u) = b + (1-2u) a`.
#[inline]
fn g_llr(a: f64, b: f64, u: u8) -> f64 {
    if u == 0 {
        b + a
    } else {
        b - a
    }
}

/// Log-probability increment of deciding `bit` under LLR `l`:
/// `ln σ((1-2 bit) l) = -ln(1 + exp(-(1-2 bit) l))`.
#[inline]
fn metric_increment(bit: u8, l: f64) -> f64 {
    let x = if bit == 0 { l } else { -l };
    if x >= 0.0 {
        -(-x).exp().ln_1p()
    } else {
        x - x.exp().ln_1p()
    }
}

fn log_sum_exp(values: &[f64]) -> f64 {
    let m = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return m;
    }
    m + values.iter().map(|v| (v - m).exp()).sum::<f64>().ln()
}

/// One syndrome-decoding problem.
#[derive(Debug, Clone)]
pub struct DecodeTask {
    pub n: usize,
    /// Per-position prior LLRs, length `2^n`.
    pub prior_llr: Vec<f64>,
    /// Z-frozen positions with their syndrome bits, sorted by position.
    pub frozen_values: Vec<(usize, u8)>,
    /// X-frozen positions (unknown to the X-error decoder), sorted.
    pub dont_care: Vec<usize>,
    /// Information positions, sorted.
    pub information: Vec<usize>,
    pub list_size: usize,
    pub coset_aggregation: bool,
    /// -1 for free positions, 0/1 for forced syndrome bits.
    forced: Vec<i8>,
}

impl DecodeTask {
    pub fn new(
        n: usize,
        prior_llr: Vec<f64>,
        frozen_values: Vec<(usize, u8)>,
        dont_care: Vec<usize>,
        information: Vec<usize>,
        list_size: usize,
        coset_aggregation: bool,
    ) -> Result<Self> {
        if n == 0 || n > 30 {
            return Err(Error::invalid(format!("unsupported transform order n={n}")));
        }
        let nn = 1usize << n;
        if prior_llr.len() != nn {
            return Err(Error::invalid("prior LLR length must be 2^n"));
        }
        if prior_llr.iter().any(|l| !l.is_finite()) {
            return Err(Error::invalid("prior LLRs must be finite"));
        }
        if list_size == 0 {
            return Err(Error::invalid("list size must be at least 1"));
        }
        let mut seen = vec![false; nn];
        let mut mark = |indices: &mut dyn Iterator<Item = usize>| -> Result<()> {
            for i in indices {
                if i >= nn || seen[i] {
                    return Err(Error::invalid(
                        "frozen/dont-care/information sets must partition [0, N)",
                    ));
                }
                seen[i] = true;
            }
            Ok(())
        };
        mark(&mut frozen_values.iter().map(|&(i, _)| i))?;
        mark(&mut dont_care.iter().copied())?;
        mark(&mut information.iter().copied())?;
        if !seen.iter().all(|&s| s) {
            return Err(Error::invalid(
                "frozen/dont-care/information sets must cover [0, N)",
            ));
        }
        let mut forced = vec![-1i8; nn];
        for &(i, b) in &frozen_values {
            if b > 1 {
                return Err(Error::invalid("syndrome bits must be 0 or 1"));
            }
            forced[i] = b as i8;
        }
        Ok(DecodeTask {
            n,
            prior_llr,
            frozen_values,
            dont_care,
            information,
            list_size,
            coset_aggregation,
            forced,
        })
    }

    /// Task for a constructed spec: uniform prior `ln((1-q)/q)` and the
    /// syndrome bits aligned with `spec.frozen_z`.
    pub fn for_spec(
        spec: &crate::construction::CodeSpec,
        syndrome: &[u8],
        q: f64,
        list_size: usize,
        coset_aggregation: bool,
    ) -> Result<Self> {
        if !(q > 0.0 && q <= 0.5) {
            return Err(Error::invalid(format!(
                "decoding prior requires 0 < q <= 1/2, got {q}"
            )));
        }
        if syndrome.len() != spec.frozen_z.len() {
            return Err(Error::invalid("syndrome length must match |F_Z|"));
        }
        let llr = ((1.0 - q) / q).ln();
        DecodeTask::new(
            spec.n,
            vec![llr; spec.block_length],
            spec.frozen_z
                .iter()
                .zip(syndrome)
                .map(|(&i, &b)| (i, b))
                .collect(),
            spec.frozen_x.clone(),
            spec.information.clone(),
            list_size,
            coset_aggregation,
        )
    }

    /// Replaces the syndrome bits (same frozen positions).
    pub fn set_syndrome(&mut self, syndrome: &[u8]) -> Result<()> {
        if syndrome.len() != self.frozen_values.len() {
            return Err(Error::invalid("syndrome length must match |F_Z|"));
        }
        for ((pos, stored), &b) in self.frozen_values.iter_mut().zip(syndrome) {
            *stored = b;
            self.forced[*pos] = b as i8;
        }
        Ok(())
    }
}

/// Decoder output.
#[derive(Debug, Clone)]
pub struct DecodeResult {
    /// Estimated bits on the information positions (aggregated over cosets
    /// when aggregation is on, otherwise from the best path).
    pub u_hat_information: Vec<u8>,
    /// Full `u`-estimate of the best surviving path.
    pub best_path: BitVector,
    /// Metrics of the surviving paths, sorted descending.
    pub path_metrics: Vec<f64>,
    /// Aggregated per-coset log-probabilities, sorted descending, when
    /// coset aggregation is on.
    pub coset_scores: Option<Vec<f64>>,
}

/// Reusable SCL engine; one instance per thread.
pub struct ListDecoder {
    n: usize,
    nn: usize,
    max_list: usize,
    /// `llr_pool[stage][slot]`, arrays of length `2^(n-stage)`; stage 0 is
    /// the shared channel prior and has no slots.
    llr_pool: Vec<Vec<Vec<f64>>>,
    /// `bit_pool[stage][slot]`, arrays of length `2 * 2^(n-stage)` holding
    /// the two per-phase partial-sum halves.
    bit_pool: Vec<Vec<Vec<u8>>>,
    slot_of: Vec<Vec<usize>>,
    refcount: Vec<Vec<u32>>,
    free_slots: Vec<Vec<usize>>,
    active: Vec<bool>,
    inactive_paths: Vec<usize>,
    metric: Vec<f64>,
    u_hat: Vec<Vec<u8>>,
    channel_llr: Vec<f64>,
}

impl ListDecoder {
    pub fn new(n: usize, max_list: usize) -> Result<Self> {
        if n == 0 || n > 30 {
            return Err(Error::invalid(format!("unsupported transform order n={n}")));
        }
        if max_list == 0 {
            return Err(Error::invalid("list capacity must be at least 1"));
        }
        let nn = 1usize << n;
        let mut llr_pool = Vec::with_capacity(n + 1);
        let mut bit_pool = Vec::with_capacity(n + 1);
        for stage in 0..=n {
            let len = 1usize << (n - stage);
            if stage == 0 {
                llr_pool.push(Vec::new());
            } else {
                llr_pool.push(vec![vec![0.0; len]; max_list]);
            }
            bit_pool.push(vec![vec![0u8; 2 * len]; max_list]);
        }
        Ok(ListDecoder {
            n,
            nn,
            max_list,
            llr_pool,
            bit_pool,
            slot_of: vec![vec![usize::MAX; max_list]; n + 1],
            refcount: vec![vec![0; max_list]; n + 1],
            free_slots: vec![Vec::with_capacity(max_list); n + 1],
            active: vec![false; max_list],
            inactive_paths: Vec::with_capacity(max_list),
            metric: vec![0.0; max_list],
            u_hat: vec![vec![0u8; nn]; max_list],
            channel_llr: vec![0.0; nn],
        })
    }

    pub fn block_length(&self) -> usize {
        self.nn
    }

    fn reset(&mut self, prior_llr: &[f64]) {
        self.channel_llr.copy_from_slice(prior_llr);
        for stage in 0..=self.n {
            self.free_slots[stage].clear();
            for slot in (0..self.max_list).rev() {
                self.free_slots[stage].push(slot);
                self.refcount[stage][slot] = 0;
            }
        }
        self.inactive_paths.clear();
        for p in (0..self.max_list).rev() {
            self.inactive_paths.push(p);
            self.active[p] = false;
            self.metric[p] = 0.0;
        }
    }

    fn assign_initial_path(&mut self) -> usize {
        let p = self.inactive_paths.pop().expect("fresh decoder has paths");
        self.active[p] = true;
        self.metric[p] = 0.0;
        self.u_hat[p].fill(0);
        for stage in 0..=self.n {
            let slot = self.free_slots[stage].pop().expect("fresh decoder has slots");
            self.slot_of[stage][p] = slot;
            self.refcount[stage][slot] = 1;
        }
        p
    }

    fn clone_path(&mut self, p: usize) -> usize {
        let p2 = self.inactive_paths.pop().expect("list capacity respected");
        self.active[p2] = true;
        self.metric[p2] = self.metric[p];
        let (src, dst) = index_two(&mut self.u_hat, p, p2);
        dst.copy_from_slice(src);
        for stage in 0..=self.n {
            let slot = self.slot_of[stage][p];
            self.slot_of[stage][p2] = slot;
            self.refcount[stage][slot] += 1;
        }
        p2
    }

    fn kill_path(&mut self, p: usize) {
        self.active[p] = false;
        self.inactive_paths.push(p);
        for stage in 0..=self.n {
            let slot = self.slot_of[stage][p];
            self.refcount[stage][slot] -= 1;
            if self.refcount[stage][slot] == 0 {
                self.free_slots[stage].push(slot);
            }
        }
    }

    /// Copy-on-write access to path `p`'s arrays at `stage`.
    fn cow(&mut self, stage: usize, p: usize) -> usize {
        let slot = self.slot_of[stage][p];
        if self.refcount[stage][slot] == 1 {
            return slot;
        }
        self.refcount[stage][slot] -= 1;
        let fresh = self.free_slots[stage].pop().expect("slot available under L paths");
        if stage > 0 {
            let (src, dst) = index_two(&mut self.llr_pool[stage], slot, fresh);
            dst.copy_from_slice(src);
        }
        let (src, dst) = index_two(&mut self.bit_pool[stage], slot, fresh);
        dst.copy_from_slice(src);
        self.refcount[stage][fresh] = 1;
        self.slot_of[stage][p] = fresh;
        fresh
    }

    fn calc_llr(&mut self, stage: usize, phase: usize) {
        if stage == 0 {
            return;
        }
        let even = phase & 1 == 0;
        if even {
            self.calc_llr(stage - 1, phase >> 1);
        }
        let half = 1usize << (self.n - stage);
        for p in 0..self.max_list {
            if !self.active[p] {
                continue;
            }
            let out = self.cow(stage, p);
            let prev_slot = self.slot_of[stage - 1][p];
            let (lower, upper) = self.llr_pool.split_at_mut(stage);
            let cur = &mut upper[0][out];
            let prev: &[f64] = if stage == 1 {
                &self.channel_llr
            } else {
                &lower[stage - 1][prev_slot]
            };
            if even {
                for s in 0..half {
                    cur[s] = f_llr(prev[s], prev[s + half]);
                }
            } else {
                let bits = &self.bit_pool[stage][out][..half];
                for s in 0..half {
                    cur[s] = g_llr(prev[s], prev[s + half], bits[s]);
                }
            }
        }
    }

    /// Folds completed sibling partial sums upward; `phase` must be odd.
    fn update_partial_sums(&mut self, stage: usize, phase: usize) {
        debug_assert!(phase & 1 == 1 && stage >= 1);
        let half = 1usize << (self.n - stage);
        let psi = phase >> 1;
        let offset = (psi & 1) * 2 * half;
        for p in 0..self.max_list {
            if !self.active[p] {
                continue;
            }
            let dst_slot = self.cow(stage - 1, p);
            let src_slot = self.slot_of[stage][p];
            let (lower, upper) = self.bit_pool.split_at_mut(stage);
            let src = &upper[0][src_slot];
            let dst = &mut lower[stage - 1][dst_slot];
            for s in 0..half {
                dst[offset + s] = src[s] ^ src[half + s];
                dst[offset + half + s] = src[half + s];
            }
        }
        if psi & 1 == 1 {
            self.update_partial_sums(stage - 1, psi);
        }
    }

    fn leaf_llr(&self, p: usize) -> f64 {
        self.llr_pool[self.n][self.slot_of[self.n][p]][0]
    }

    fn set_leaf_bit(&mut self, p: usize, phase: usize, bit: u8) {
        let slot = self.cow(self.n, p);
        self.bit_pool[self.n][slot][phase & 1] = bit;
        self.u_hat[p][phase] = bit;
    }

    /// Lexicographic comparison of two paths' decision prefixes; used only
    /// to break exact metric ties deterministically (smaller prefix wins).
    fn prefix_cmp(&self, a: usize, b: usize, upto: usize) -> std::cmp::Ordering {
        self.u_hat[a][..upto].cmp(&self.u_hat[b][..upto])
    }

    fn continue_frozen(&mut self, phase: usize, bit: u8) {
        for p in 0..self.max_list {
            if !self.active[p] {
                continue;
            }
            let l = self.leaf_llr(p);
            self.metric[p] += metric_increment(bit, l);
            self.set_leaf_bit(p, phase, bit);
        }
    }

    fn continue_branch(&mut self, phase: usize, list_size: usize) {
        struct Candidate {
            metric: f64,
            path: usize,
            bit: u8,
        }
        let mut candidates: Vec<Candidate> = Vec::with_capacity(2 * list_size);
        for p in 0..self.max_list {
            if !self.active[p] {
                continue;
            }
            let l = self.leaf_llr(p);
            for bit in [0u8, 1u8] {
                candidates.push(Candidate {
                    metric: self.metric[p] + metric_increment(bit, l),
                    path: p,
                    bit,
                });
            }
        }
        let keep = candidates.len().min(list_size);
        candidates.sort_unstable_by(|a, b| {
            b.metric
                .total_cmp(&a.metric)
                .then_with(|| self.prefix_cmp(a.path, b.path, phase))
                .then(a.bit.cmp(&b.bit))
        });
        candidates.truncate(keep);

        // Per path: which bits survive, with their metrics.
        let mut kept: HashMap<usize, Vec<(u8, f64)>> = HashMap::with_capacity(keep);
        for c in &candidates {
            kept.entry(c.path).or_default().push((c.bit, c.metric));
        }
        // Kill losers first so clone slots are available.
        let paths: Vec<usize> = (0..self.max_list).filter(|&p| self.active[p]).collect();
        for &p in &paths {
            if !kept.contains_key(&p) {
                self.kill_path(p);
            }
        }
        for &p in &paths {
            let Some(branches) = kept.get(&p) else { continue };
            match branches.as_slice() {
                [(bit, m)] => {
                    self.metric[p] = *m;
                    self.set_leaf_bit(p, phase, *bit);
                }
                [first, second] => {
                    let p2 = self.clone_path(p);
                    self.metric[p] = first.1;
                    self.set_leaf_bit(p, phase, first.0);
                    self.metric[p2] = second.1;
                    self.set_leaf_bit(p2, phase, second.0);
                }
                _ => unreachable!("at most two branches per path"),
            }
        }
    }

    /// Runs list decoding and post-processes according to the task's
    /// aggregation flag.
    pub fn decode(&mut self, task: &DecodeTask) -> Result<DecodeResult> {
        if task.n != self.n {
            return Err(Error::invalid("task blocklength does not match decoder"));
        }
        if task.list_size > self.max_list {
            return Err(Error::invalid(format!(
                "task list size {} exceeds decoder capacity {}",
                task.list_size, self.max_list
            )));
        }
        self.reset(&task.prior_llr);
        self.assign_initial_path();
        for phase in 0..self.nn {
            self.calc_llr(self.n, phase);
            match task.forced[phase] {
                -1 => self.continue_branch(phase, task.list_size),
                b => self.continue_frozen(phase, b as u8),
            }
            if phase & 1 == 1 {
                self.update_partial_sums(self.n, phase);
            }
        }

        let mut paths: Vec<usize> = (0..self.max_list).filter(|&p| self.active[p]).collect();
        paths.sort_by(|&a, &b| {
            self.metric[b]
                .total_cmp(&self.metric[a])
                .then_with(|| self.prefix_cmp(a, b, self.nn))
        });
        debug_assert!(!paths.is_empty());

        let path_metrics: Vec<f64> = paths.iter().map(|&p| self.metric[p]).collect();
        let best = paths[0];
        let best_path = BitVector::from_bits(&self.u_hat[best]);

        let (u_hat_information, coset_scores) = if task.coset_aggregation {
            // Group surviving paths by their information-bit pattern; the
            // don't-care (X-frozen) bits only distinguish coset members.
            let mut groups: Vec<(Vec<u8>, Vec<f64>)> = Vec::new();
            let mut index: HashMap<Vec<u8>, usize> = HashMap::new();
            for &p in &paths {
                let key: Vec<u8> = task.information.iter().map(|&i| self.u_hat[p][i]).collect();
                match index.get(&key) {
                    Some(&g) => groups[g].1.push(self.metric[p]),
                    None => {
                        index.insert(key.clone(), groups.len());
                        groups.push((key, vec![self.metric[p]]));
                    }
                }
            }
            let mut scored: Vec<(f64, Vec<u8>)> = groups
                .into_iter()
                .map(|(key, ms)| (log_sum_exp(&ms), key))
                .collect();
            scored.sort_by(|a, b| b.0.total_cmp(&a.0).then_with(|| a.1.cmp(&b.1)));
            let scores: Vec<f64> = scored.iter().map(|(s, _)| *s).collect();
            (scored.swap_remove(0).1, Some(scores))
        } else {
            (
                task.information.iter().map(|&i| self.u_hat[best][i]).collect(),
                None,
            )
        };

        Ok(DecodeResult {
            u_hat_information,
            best_path,
            path_metrics,
            coset_scores,
        })
    }

    /// Genie-aided SC sweep: every position is forced to the supplied true
    /// bit and the pre-decision LLR of each position is returned. Used to
    /// compare observed per-bit decision errors against construction
    /// estimates.
    pub fn sc_forced_llrs(&mut self, prior_llr: &[f64], forced: &BitVector) -> Result<Vec<f64>> {
        if prior_llr.len() != self.nn || forced.len() != self.nn {
            return Err(Error::invalid("length mismatch in forced SC sweep"));
        }
        self.reset(prior_llr);
        let p = self.assign_initial_path();
        let mut llrs = Vec::with_capacity(self.nn);
        for phase in 0..self.nn {
            self.calc_llr(self.n, phase);
            llrs.push(self.leaf_llr(p));
            self.set_leaf_bit(p, phase, forced.get(phase));
            if phase & 1 == 1 {
                self.update_partial_sums(self.n, phase);
            }
        }
        Ok(llrs)
    }
}

fn index_two<T>(pool: &mut [T], a: usize, b: usize) -> (&T, &mut T) {
    debug_assert_ne!(a, b);
    if a < b {
        let (lo, hi) = pool.split_at_mut(b);
        (&lo[a], &mut hi[0])
    } else {
        let (lo, hi) = pool.split_at_mut(a);
        (&hi[0], &mut lo[b])
    }
}

/// SC decoding: list decoding with `L = 1`.
pub fn sc_decode(task: &DecodeTask) -> Result<DecodeResult> {
    if task.list_size != 1 {
        return Err(Error::invalid("sc_decode requires list size 1"));
    }
    ListDecoder::new(task.n, 1)?.decode(task)
}

/// Successive cancellation list decoding.
pub fn scl_decode(task: &DecodeTask) -> Result<DecodeResult> {
    ListDecoder::new(task.n, task.list_size)?.decode(task)
}

/// List decoding with coset aggregation: surviving paths are grouped by
/// their information-bit pattern and each group is scored by the
/// log-sum-exp of its path metrics.
pub fn scl_c_decode(task: &DecodeTask) -> Result<DecodeResult> {
    if !task.coset_aggregation {
        return Err(Error::invalid("scl_c_decode requires coset_aggregation"));
    }
    scl_decode(task)
}

/// Error estimate from a `u`-estimate: `ê = ûG` (the transform is its own
/// inverse).
pub fn error_estimate_from_u(u_hat: &BitVector) -> Result<BitVector> {
    polar_transform(u_hat)
}
