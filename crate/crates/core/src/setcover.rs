//! Exact small-instance combinatorics over bitmasks.
//!
//! Both routines are exponential and meant for universes of a few dozen
//! elements at most; callers enforce their own size caps.

use std::collections::HashMap;

/// Hard limit on universe size for the bitmask routines.
pub const MAX_BITS: usize = 32;

/// Minimum number of `sets` whose union contains `universe`.
///
/// Returns the indices of an optimal selection (lowest indices preferred on
/// ties), or `None` when some element of `universe` lies in no set.
pub fn min_cover(universe: u32, sets: &[u32]) -> Option<Vec<usize>> {
    let covering: Vec<Vec<usize>> = (0..MAX_BITS)
        .map(|bit| (0..sets.len()).filter(|&s| sets[s] >> bit & 1 == 1).collect())
        .collect();
    let mut bits = universe;
    while bits != 0 {
        let bit = bits.trailing_zeros() as usize;
        if covering[bit].is_empty() {
            return None;
        }
        bits &= bits - 1;
    }

    // memo[remaining] = (optimal count, set chosen first)
    let mut memo: HashMap<u32, (u32, usize)> = HashMap::new();
    solve_cover(universe, sets, &covering, &mut memo);

    let mut chosen = Vec::new();
    let mut remaining = universe;
    while remaining != 0 {
        let (_, s) = memo[&remaining];
        chosen.push(s);
        remaining &= !sets[s];
    }
    Some(chosen)
}

fn solve_cover(
    remaining: u32,
    sets: &[u32],
    covering: &[Vec<usize>],
    memo: &mut HashMap<u32, (u32, usize)>,
) -> u32 {
    if remaining == 0 {
        return 0;
    }
    if let Some(&(count, _)) = memo.get(&remaining) {
        return count;
    }
    // every cover must pick some set containing the lowest uncovered element
    let bit = remaining.trailing_zeros() as usize;
    let mut best = (u32::MAX, usize::MAX);
    for &s in &covering[bit] {
        let count = 1 + solve_cover(remaining & !sets[s], sets, covering, memo);
        if count < best.0 {
            best = (count, s);
        }
    }
    memo.insert(remaining, best);
    best.0
}

/// Largest subset of `vertices` containing no conflicting pair.
///
/// `conflicts[v]` is the bitmask of vertices that may not coexist with `v`.
/// Returns the chosen vertices in ascending order.
pub fn max_packing(vertices: u32, conflicts: &[u32]) -> Vec<usize> {
    let mut memo: HashMap<u32, u32> = HashMap::new();
    let best = solve_packing(vertices, conflicts, &mut memo);
    (0..MAX_BITS).filter(|&v| best >> v & 1 == 1).collect()
}

fn solve_packing(available: u32, conflicts: &[u32], memo: &mut HashMap<u32, u32>) -> u32 {
    if available == 0 {
        return 0;
    }
    if let Some(&set) = memo.get(&available) {
        return set;
    }
    let v = available.trailing_zeros() as usize;
    let without = available & !(1 << v);
    let skip = solve_packing(without, conflicts, memo);
    let take = (1 << v) | solve_packing(without & !conflicts[v], conflicts, memo);
    let best = if take.count_ones() >= skip.count_ones() { take } else { skip };
    memo.insert(available, best);
    best
}
