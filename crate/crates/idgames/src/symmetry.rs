//! The equivalence group of game functions and the class census.
//!
//! Two functions are equivalent when one arises from the other by composing
//! (i) per-player input relabelling, (ii) per-player output relabelling
//! conditioned on the local input (bijective for every input value), and
//! (iii) player reordering. Optimal winning probabilities are invariant
//! under all of these, so bounds need only be computed once per equivalence
//! class.
//!
//! The element convention: an element g = (sigma, pi, h) acts on f by
//!
//! ```text
//! (g . f)_k(x) = h_{sigma(k)}( f_{sigma(k)}(w), w_{sigma(k)} )
//! with w_j = pi_j( x_{sigma^{-1}(j)} )
//! ```
//!
//! i.e. the new player k plays old player sigma(k)'s role, inputs are pushed
//! through pi before reaching the old game, and outputs are relabelled by h
//! conditioned on the input that the old player saw.

use crate::game::{decode_input, encode_input, GameFunction, Scenario};
use crate::{Error, Result};

/// One relabelling move: a player permutation, per-player input permutations
/// and per-player, per-input output bijections.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelabellingElement {
    scenario: Scenario,
    /// New player k takes over old player `player_perm[k]`.
    player_perm: Vec<usize>,
    /// `input_perms[j][x]` is where old player j's input x is mapped.
    input_perms: Vec<Vec<usize>>,
    /// `output_maps[j][x][y]` relabels old player j's output y when their
    /// (already permuted) input was x. Bijective in y for every x.
    output_maps: Vec<Vec<Vec<usize>>>,
}

fn is_permutation(p: &[usize], n: usize) -> bool {
    if p.len() != n {
        return false;
    }
    let mut seen = vec![false; n];
    for &v in p {
        if v >= n || seen[v] {
            return false;
        }
        seen[v] = true;
    }
    true
}

impl RelabellingElement {
    pub fn new(
        scenario: Scenario,
        player_perm: Vec<usize>,
        input_perms: Vec<Vec<usize>>,
        output_maps: Vec<Vec<Vec<usize>>>,
    ) -> Result<Self> {
        let n = scenario.players();
        if !is_permutation(&player_perm, n) {
            return Err(Error::NotBijective);
        }
        // Reordering players only makes sense between players with the same
        // number of inputs (always true in census scenarios).
        for (k, &j) in player_perm.iter().enumerate() {
            if scenario.input_count(j) != scenario.input_count(k) {
                return Err(Error::ScenarioMismatch(
                    "player permutation moves players with different input counts".into(),
                ));
            }
        }
        if input_perms.len() != n || output_maps.len() != n {
            return Err(Error::ScenarioMismatch(
                "need one input permutation and output map per player".into(),
            ));
        }
        for j in 0..n {
            if !is_permutation(&input_perms[j], scenario.input_count(j)) {
                return Err(Error::NotBijective);
            }
            if output_maps[j].len() != scenario.input_count(j) {
                return Err(Error::ScenarioMismatch(
                    "output maps must cover every input".into(),
                ));
            }
            for per_input in &output_maps[j] {
                if !is_permutation(per_input, scenario.outputs()) {
                    return Err(Error::NotBijective);
                }
            }
        }
        Ok(RelabellingElement {
            scenario,
            player_perm,
            input_perms,
            output_maps,
        })
    }

    pub fn identity(scenario: Scenario) -> Self {
        let n = scenario.players();
        let player_perm = (0..n).collect();
        let input_perms = (0..n)
            .map(|j| (0..scenario.input_count(j)).collect())
            .collect();
        let output_maps = (0..n)
            .map(|j| {
                (0..scenario.input_count(j))
                    .map(|_| (0..scenario.outputs()).collect())
                    .collect()
            })
            .collect();
        RelabellingElement {
            scenario,
            player_perm,
            input_perms,
            output_maps,
        }
    }

    /// Uniformly random element; player reordering is included only when
    /// the scenario allows it (equal input counts).
    pub fn random<R: rand::Rng>(scenario: &Scenario, rng: &mut R) -> Self {
        let n = scenario.players();
        let shuffle = |items: &mut Vec<usize>, rng: &mut R| {
            for i in (1..items.len()).rev() {
                items.swap(i, rng.gen_range(0..=i));
            }
        };
        let mut player_perm: Vec<usize> = (0..n).collect();
        if scenario.is_symmetric() {
            shuffle(&mut player_perm, rng);
        }
        let mut input_perms = Vec::with_capacity(n);
        let mut output_maps = Vec::with_capacity(n);
        for j in 0..n {
            let mut pi: Vec<usize> = (0..scenario.input_count(j)).collect();
            shuffle(&mut pi, rng);
            input_perms.push(pi);
            let maps = (0..scenario.input_count(j))
                .map(|_| {
                    let mut h: Vec<usize> = (0..scenario.outputs()).collect();
                    shuffle(&mut h, rng);
                    h
                })
                .collect();
            output_maps.push(maps);
        }
        RelabellingElement::new(scenario.clone(), player_perm, input_perms, output_maps)
            .expect("components are permutations")
    }

    pub fn scenario(&self) -> &Scenario {
        &self.scenario
    }

    pub fn player_perm(&self) -> &[usize] {
        &self.player_perm
    }

    pub fn input_perms(&self) -> &[Vec<usize>] {
        &self.input_perms
    }

    pub fn output_maps(&self) -> &[Vec<Vec<usize>>] {
        &self.output_maps
    }

    fn inverse_player_perm(&self) -> Vec<usize> {
        let mut inv = vec![0; self.player_perm.len()];
        for (k, &j) in self.player_perm.iter().enumerate() {
            inv[j] = k;
        }
        inv
    }

    /// The input tuple fed to the old game when the new game is queried at
    /// `x`, i.e. w with w_j = pi_j(x_{sigma^{-1}(j)}).
    fn source_inputs(&self, x: &[usize]) -> Vec<usize> {
        let inv = self.inverse_player_perm();
        (0..x.len())
            .map(|j| self.input_perms[j][x[inv[j]]])
            .collect()
    }

    /// Group product, g1 acting first:
    /// apply(g2, apply(g1, f)) = apply(compose(g2, g1), f).
    pub fn compose(g2: &RelabellingElement, g1: &RelabellingElement) -> Result<RelabellingElement> {
        if g1.scenario != g2.scenario {
            return Err(Error::ScenarioMismatch(
                "composing elements of different scenarios".into(),
            ));
        }
        let s = &g1.scenario;
        let n = s.players();
        let inv1 = g1.inverse_player_perm();
        let player_perm: Vec<usize> = (0..n).map(|k| g1.player_perm[g2.player_perm[k]]).collect();
        let mut input_perms = Vec::with_capacity(n);
        let mut output_maps = Vec::with_capacity(n);
        for j in 0..n {
            let j2 = inv1[j]; // slot of old player j in g1's new game
            let m = s.input_count(j);
            let pi: Vec<usize> = (0..m)
                .map(|x| g1.input_perms[j][g2.input_perms[j2][x]])
                .collect();
            // inverse of g1's input permutation at player j
            let mut pi1_inv = vec![0; m];
            for (x, &v) in g1.input_perms[j].iter().enumerate() {
                pi1_inv[v] = x;
            }
            let maps: Vec<Vec<usize>> = (0..m)
                .map(|u| {
                    (0..s.outputs())
                        .map(|z| g2.output_maps[j2][pi1_inv[u]][g1.output_maps[j][u][z]])
                        .collect()
                })
                .collect();
            input_perms.push(pi);
            output_maps.push(maps);
        }
        RelabellingElement::new(s.clone(), player_perm, input_perms, output_maps)
    }
}

/// Applies a relabelling element to a game function.
pub fn apply(g: &RelabellingElement, f: &GameFunction) -> Result<GameFunction> {
    if g.scenario() != f.scenario() {
        return Err(Error::ScenarioMismatch(
            "element and function have different scenarios".into(),
        ));
    }
    let s = f.scenario().clone();
    let n = s.players();
    let mut table = vec![0u32; s.joint_inputs()];
    for xi in 0..s.joint_inputs() {
        let x = decode_input(xi, &s);
        let w = g.source_inputs(&x);
        let wi = encode_input(&w, &s)?;
        let z = f.output_index(wi);
        let mut yi = 0usize;
        let mut stride = 1usize;
        for k in 0..n {
            let j = g.player_perm[k];
            let zj = {
                let mut v = z;
                for _ in 0..j {
                    v /= s.outputs();
                }
                v % s.outputs()
            };
            let yk = g.output_maps[j][w[j]][zj];
            yi += yk * stride;
            stride *= s.outputs();
        }
        table[xi] = yi as u32;
    }
    GameFunction::from_table(s, table)
}

/// Number of relabelling tuples: prod_k (m_i^(k)! * (m_o!)^(m_i^(k))) * n!.
/// Orbit sizes always divide this.
pub fn group_order(s: &Scenario) -> Result<u64> {
    if !s.is_symmetric() {
        return Err(Error::InvalidScenario(
            "group order with player reordering needs equal input counts".into(),
        ));
    }
    fn factorial(n: usize) -> Option<u64> {
        (1..=n as u64).try_fold(1u64, |acc, v| acc.checked_mul(v))
    }
    let mi = s.input_count(0);
    let per_player = factorial(mi)
        .and_then(|fi| {
            let fo = factorial(s.outputs())?;
            let mut acc = fi;
            for _ in 0..mi {
                acc = acc.checked_mul(fo)?;
            }
            Some(acc)
        })
        .ok_or_else(|| Error::TooLarge("group order overflows".into()))?;
    let mut order =
        factorial(s.players()).ok_or_else(|| Error::TooLarge("group order overflows".into()))?;
    for _ in 0..s.players() {
        order = order
            .checked_mul(per_player)
            .ok_or_else(|| Error::TooLarge("group order overflows".into()))?;
    }
    Ok(order)
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut result = Vec::new();
    let mut items: Vec<usize> = (0..n).collect();
    fn heap(k: usize, items: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k <= 1 {
            out.push(items.clone());
            return;
        }
        for i in 0..k {
            heap(k - 1, items, out);
            if k.is_multiple_of(2) {
                items.swap(i, k - 1);
            } else {
                items.swap(0, k - 1);
            }
        }
    }
    heap(n, &mut items, &mut result);
    result
}

/// All group elements of a symmetric scenario, as tuples.
pub fn all_elements(s: &Scenario) -> Result<Vec<RelabellingElement>> {
    if !s.is_symmetric() {
        return Err(Error::InvalidScenario(
            "full group enumeration needs equal input counts".into(),
        ));
    }
    let n = s.players();
    let mi = s.input_count(0);
    let mo = s.outputs();
    let player_perms = permutations(n);
    let input_perms = permutations(mi);
    let output_perms = permutations(mo);

    let order = group_order(s)?;
    if order > (1 << 26) {
        return Err(Error::TooLarge(format!(
            "group has {order} elements; refusing to materialize"
        )));
    }

    let mut elements = Vec::with_capacity(order as usize);
    let ip_count = input_perms.len() as u64;
    let op_count = output_perms.len() as u64;
    let ip_total = ip_count.pow(n as u32);
    let op_total = op_count.pow((n * mi) as u32);
    for sigma in &player_perms {
        for ipi in 0..ip_total {
            let mut rest = ipi;
            let mut pis = Vec::with_capacity(n);
            for _ in 0..n {
                pis.push(input_perms[(rest % ip_count) as usize].clone());
                rest /= ip_count;
            }
            for opi in 0..op_total {
                let mut rest = opi;
                let mut maps = Vec::with_capacity(n);
                for _ in 0..n {
                    let mut per_player = Vec::with_capacity(mi);
                    for _ in 0..mi {
                        per_player.push(output_perms[(rest % op_count) as usize].clone());
                        rest /= op_count;
                    }
                    maps.push(per_player);
                }
                elements.push(RelabellingElement::new(
                    s.clone(),
                    sigma.clone(),
                    pis.clone(),
                    maps,
                )?);
            }
        }
    }
    debug_assert_eq!(elements.len() as u64, order);
    Ok(elements)
}

/// A group element precompiled for the census hot loop: a permutation of
/// joint inputs plus, per joint input, a permutation of joint outputs.
pub(crate) struct CompiledElement {
    /// Old joint input consulted for each new joint input.
    jperm: Vec<u32>,
    /// `out_map[x * joint_outputs + z]` = new joint output when the old game
    /// answered z at new joint input x.
    out_map: Vec<u8>,
    radix: usize,
}

impl CompiledElement {
    pub(crate) fn compile(g: &RelabellingElement) -> Self {
        let s = g.scenario();
        let n = s.players();
        let radix = s.joint_outputs();
        assert!(radix <= 256, "joint outputs must fit u8 for the census");
        let joint = s.joint_inputs();
        let mut jperm = Vec::with_capacity(joint);
        let mut out_map = vec![0u8; joint * radix];
        for xi in 0..joint {
            let x = decode_input(xi, s);
            let w = g.source_inputs(&x);
            jperm.push(encode_input(&w, s).unwrap() as u32);
            for z in 0..radix {
                let mut yi = 0usize;
                let mut stride = 1usize;
                for k in 0..n {
                    let j = g.player_perm[k];
                    let zj = (z / s.outputs().pow(j as u32)) % s.outputs();
                    yi += g.output_maps[j][w[j]][zj] * stride;
                    stride *= s.outputs();
                }
                out_map[xi * radix + z] = yi as u8;
            }
        }
        CompiledElement {
            jperm,
            out_map,
            radix,
        }
    }

    /// Integer code of g.f, given f's table digits.
    #[inline]
    pub(crate) fn apply_code(&self, table: &[u8]) -> u64 {
        let mut code = 0u64;
        let radix = self.radix as u64;
        for x in (0..table.len()).rev() {
            let z = table[self.jperm[x] as usize] as usize;
            code = code * radix + self.out_map[x * self.radix + z] as u64;
        }
        code
    }
}

/// The explicit orbit of a function under the full group, sorted by code.
pub fn orbit(f: &GameFunction) -> Result<Vec<GameFunction>> {
    let s = f.scenario();
    s.function_space_size()
        .ok_or_else(|| Error::TooLarge("function space exceeds u64 codes".into()))?;
    let elements = all_elements(s)?;
    let mut codes: Vec<u64> = Vec::with_capacity(elements.len());
    for g in &elements {
        codes.push(apply(g, f)?.code());
    }
    codes.sort_unstable();
    codes.dedup();
    codes
        .into_iter()
        .map(|c| GameFunction::from_code(s.clone(), c))
        .collect()
}

/// Minimal integer encoding in the orbit; idempotent and constant on orbits.
pub fn canonical_form(f: &GameFunction) -> Result<GameFunction> {
    let s = f.scenario();
    s.function_space_size()
        .ok_or_else(|| Error::TooLarge("function space exceeds u64 codes".into()))?;
    let elements = all_elements(s)?;
    let mut best = u64::MAX;
    for g in &elements {
        best = best.min(apply(g, f)?.code());
    }
    GameFunction::from_code(s.clone(), best)
}

/// One equivalence class: the minimal-code representative and how many
/// functions the class contains.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquivalenceClass {
    pub representative: GameFunction,
    pub code: u64,
    pub orbit_size: u64,
}

struct Bitmap {
    words: Vec<u64>,
}

impl Bitmap {
    fn new(bits: u64) -> Self {
        Bitmap {
            words: vec![0u64; bits.div_ceil(64) as usize],
        }
    }

    /// Sets the bit, returning whether it was already set.
    #[inline]
    fn test_set(&mut self, idx: u64) -> bool {
        let word = (idx >> 6) as usize;
        let mask = 1u64 << (idx & 63);
        let old = self.words[word] & mask != 0;
        self.words[word] |= mask;
        old
    }

    #[inline]
    fn test(&self, idx: u64) -> bool {
        self.words[(idx >> 6) as usize] & (1u64 << (idx & 63)) != 0
    }
}

/// Partitions the whole function space into equivalence classes.
///
/// Walks a visited bitmap over integer codes in increasing order; every
/// unvisited code is the minimal element of a fresh orbit, whose members are
/// produced by applying every group element. The class list is therefore
/// sorted by representative code by construction.
pub fn enumerate_classes(s: &Scenario) -> Result<Vec<EquivalenceClass>> {
    let size = s
        .function_space_size()
        .filter(|&n| n <= 1 << 32)
        .ok_or_else(|| Error::TooLarge("function space exceeds the census bitmap".into()))?;
    let elements = all_elements(s)?;
    let compiled: Vec<CompiledElement> = elements.iter().map(CompiledElement::compile).collect();
    let radix = s.joint_outputs() as u64;
    let joint = s.joint_inputs();

    let mut visited = Bitmap::new(size);
    let mut classes = Vec::new();
    let mut table = vec![0u8; joint];
    for seed in 0..size {
        if visited.test(seed) {
            continue;
        }
        let mut c = seed;
        for digit in table.iter_mut() {
            *digit = (c % radix) as u8;
            c /= radix;
        }
        let mut orbit_size = 0u64;
        for g in &compiled {
            let code = g.apply_code(&table);
            if !visited.test_set(code) {
                orbit_size += 1;
            }
        }
        debug_assert!(orbit_size > 0);
        classes.push(EquivalenceClass {
            representative: GameFunction::from_code(s.clone(), seed)?,
            code: seed,
            orbit_size,
        });
    }
    Ok(classes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn random_element(s: &Scenario, rng: &mut StdRng) -> RelabellingElement {
        RelabellingElement::random(s, rng)
    }

    fn random_function(s: &Scenario, rng: &mut StdRng) -> GameFunction {
        let table: Vec<u32> = (0..s.joint_inputs())
            .map(|_| rng.gen_range(0..s.joint_outputs() as u32))
            .collect();
        GameFunction::from_table(s.clone(), table).unwrap()
    }

    #[test]
    fn identity_acts_trivially() {
        let s = Scenario::symmetric(2, 3, 2).unwrap();
        let mut rng = StdRng::seed_from_u64(7);
        for _ in 0..20 {
            let f = random_function(&s, &mut rng);
            let id = RelabellingElement::identity(s.clone());
            assert_eq!(apply(&id, &f).unwrap(), f);
        }
    }

    #[test]
    fn action_is_compatible_with_composition() {
        let mut rng = StdRng::seed_from_u64(11);
        for s in [
            Scenario::symmetric(2, 3, 2).unwrap(),
            Scenario::symmetric(3, 2, 2).unwrap(),
        ] {
            for _ in 0..50 {
                let f = random_function(&s, &mut rng);
                let g1 = random_element(&s, &mut rng);
                let g2 = random_element(&s, &mut rng);
                let lhs = apply(&g2, &apply(&g1, &f).unwrap()).unwrap();
                let rhs = apply(&RelabellingElement::compose(&g2, &g1).unwrap(), &f).unwrap();
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn player_swap_fixes_symmetric_game() {
        let f = crate::games::symmetric_three_input();
        let s = f.scenario().clone();
        let swap = RelabellingElement::new(
            s.clone(),
            vec![1, 0],
            vec![vec![0, 1, 2], vec![0, 1, 2]],
            vec![vec![vec![0, 1]; 3], vec![vec![0, 1]; 3]],
        )
        .unwrap();
        assert_eq!(apply(&swap, &f).unwrap(), f);
    }

    #[test]
    fn output_flip_of_constant_game() {
        let s = Scenario::symmetric(2, 3, 2).unwrap();
        let zero = GameFunction::from_table(s.clone(), vec![0; 9]).unwrap();
        // Flip player 1's output on every input.
        let g = RelabellingElement::new(
            s.clone(),
            vec![0, 1],
            vec![vec![0, 1, 2], vec![0, 1, 2]],
            vec![vec![vec![1, 0]; 3], vec![vec![0, 1]; 3]],
        )
        .unwrap();
        let flipped = apply(&g, &zero).unwrap();
        // Every input now answers (y1, y2) = (1, 0), joint output index 1.
        assert_eq!(flipped.table(), &[1; 9]);
    }

    #[test]
    fn group_orders() {
        assert_eq!(
            group_order(&Scenario::symmetric(2, 3, 2).unwrap()).unwrap(),
            4608
        );
        assert_eq!(
            group_order(&Scenario::symmetric(3, 2, 2).unwrap()).unwrap(),
            3072
        );
        assert_eq!(
            group_order(&Scenario::symmetric(1, 1, 2).unwrap()).unwrap(),
            2
        );
    }

    #[test]
    fn orbit_of_constant_contains_constants_and_divides_group_order() {
        let s = Scenario::symmetric(2, 3, 2).unwrap();
        let zero = GameFunction::from_table(s.clone(), vec![0; 9]).unwrap();
        let orb = orbit(&zero).unwrap();
        // Output conditioning turns constants into anything locally
        // computable, so the orbit is larger than the four constants but
        // must contain them all.
        for c in 0..4u32 {
            let constant = GameFunction::from_table(s.clone(), vec![c; 9]).unwrap();
            assert!(orb.contains(&constant));
        }
        // Every member's component depends only on that player's input.
        for member in &orb {
            for k in 0..2 {
                for x1 in 0..3 {
                    for x2 in 0..3 {
                        let a = encode_input(&[x1, x2], &s).unwrap();
                        let b = encode_input(
                            &[if k == 0 { x1 } else { 0 }, if k == 0 { 0 } else { x2 }],
                            &s,
                        )
                        .unwrap();
                        assert_eq!(member.component(k, a), member.component(k, b));
                    }
                }
            }
        }
        assert_eq!(4608 % orb.len() as u64, 0);
    }

    #[test]
    fn orbits_are_invariant_under_the_action() {
        let s = Scenario::symmetric(2, 3, 2).unwrap();
        let mut rng = StdRng::seed_from_u64(3);
        let f = random_function(&s, &mut rng);
        let g = random_element(&s, &mut rng);
        let fg = apply(&g, &f).unwrap();
        assert_eq!(orbit(&f).unwrap(), orbit(&fg).unwrap());
    }

    #[test]
    fn canonical_form_is_class_invariant_and_idempotent() {
        let s = Scenario::symmetric(2, 3, 2).unwrap();
        let mut rng = StdRng::seed_from_u64(5);
        for _ in 0..30 {
            let f = random_function(&s, &mut rng);
            let g = random_element(&s, &mut rng);
            let cf = canonical_form(&f).unwrap();
            assert_eq!(canonical_form(&apply(&g, &f).unwrap()).unwrap(), cf);
            assert_eq!(canonical_form(&cf).unwrap(), cf);
        }
        let zero = GameFunction::from_table(s.clone(), vec![0; 9]).unwrap();
        assert_eq!(canonical_form(&zero).unwrap(), zero);
    }

    #[test]
    fn compiled_elements_match_apply() {
        let mut rng = StdRng::seed_from_u64(19);
        for s in [
            Scenario::symmetric(2, 3, 2).unwrap(),
            Scenario::symmetric(3, 2, 2).unwrap(),
        ] {
            let radix = s.joint_outputs() as u64;
            for _ in 0..40 {
                let f = random_function(&s, &mut rng);
                let g = random_element(&s, &mut rng);
                let compiled = CompiledElement::compile(&g);
                let mut table = vec![0u8; s.joint_inputs()];
                let mut c = f.code();
                for digit in table.iter_mut() {
                    *digit = (c % radix) as u8;
                    c /= radix;
                }
                assert_eq!(compiled.apply_code(&table), apply(&g, &f).unwrap().code());
            }
        }
    }

    #[test]
    fn census_partitions_the_two_input_space() {
        let s = Scenario::symmetric(2, 2, 2).unwrap();
        let classes = enumerate_classes(&s).unwrap();
        let total: u64 = classes.iter().map(|c| c.orbit_size).sum();
        assert_eq!(total, 256);
        let order = group_order(&s).unwrap();
        for c in &classes {
            assert_eq!(order % c.orbit_size, 0);
            assert_eq!(c.representative.code(), c.code);
            assert_eq!(canonical_form(&c.representative).unwrap(), c.representative);
        }
    }
}
