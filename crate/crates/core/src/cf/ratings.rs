use std::fs;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Sparse users-by-items matrix of discrete ratings in `1..=r_max`.
/// A stored rating is an observation; everything else is unobserved.
#[derive(Debug, Clone, PartialEq)]
pub struct RatingsMatrix {
    items: usize,
    r_max: u8,
    /// Per user, `(item, rating)` sorted by item.
    rows: Vec<Vec<(usize, u8)>>,
}

impl RatingsMatrix {
    /// Builds from `(user, item, rating)` triples with 0-based ids.
    pub fn new(
        users: usize,
        items: usize,
        r_max: u8,
        entries: impl IntoIterator<Item = (usize, usize, u8)>,
    ) -> Result<Self> {
        let mut rows = vec![Vec::new(); users];
        for (u, i, r) in entries {
            if u >= users || i >= items {
                return Err(Error::InvalidInput(format!(
                    "rating ({u}, {i}) outside {users} users x {items} items"
                )));
            }
            if r < 1 || r > r_max {
                return Err(Error::InvalidInput(format!("rating {r} outside 1..={r_max}")));
            }
            rows[u].push((i, r));
        }
        for (u, row) in rows.iter_mut().enumerate() {
            row.sort_unstable();
            if row.windows(2).any(|w| w[0].0 == w[1].0) {
                return Err(Error::InvalidInput(format!("user {u} rates an item twice")));
            }
        }
        Ok(Self { items, r_max, rows })
    }

    pub fn users(&self) -> usize {
        self.rows.len()
    }

    pub fn items(&self) -> usize {
        self.items
    }

    pub fn r_max(&self) -> u8 {
        self.r_max
    }

    /// Observed `(item, rating)` pairs of a user, sorted by item.
    pub fn user(&self, u: usize) -> &[(usize, u8)] {
        &self.rows[u]
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn is_observed(&self, u: usize, i: usize) -> bool {
        self.rows[u].binary_search_by_key(&i, |e| e.0).is_ok()
    }

    /// New matrix over the listed users, in order, sharing the item axis.
    pub fn select_users(&self, users: &[usize]) -> Self {
        Self {
            items: self.items,
            r_max: self.r_max,
            rows: users.iter().map(|&u| self.rows[u].clone()).collect(),
        }
    }

    /// Seeded random partition of users into `(train, test)` with
    /// `round(test_fraction * users)` test users.
    pub fn split_users(&self, test_fraction: f64, seed: u64) -> (Self, Self) {
        let mut order: Vec<usize> = (0..self.users()).collect();
        order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        let n_test = ((test_fraction * self.users() as f64).round() as usize).min(self.users());
        let (test, train) = order.split_at(n_test);
        let (mut train, mut test) = (train.to_vec(), test.to_vec());
        train.sort_unstable();
        test.sort_unstable();
        (self.select_users(&train), self.select_users(&test))
    }
}

/// Reads MovieLens `u.data`: tab-separated `userID itemID rating timestamp`
/// with 1-based ids. User and item counts are the largest ids seen.
pub fn load_udata(path: impl AsRef<Path>, r_max: u8) -> Result<RatingsMatrix> {
    let path = path.as_ref();
    let text = fs::read_to_string(path)?;
    let mut entries = Vec::new();
    let (mut users, mut items) = (0, 0);
    for (no, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let f: Vec<&str> = line.split('\t').collect();
        if f.len() != 4 {
            return Err(Error::parse(path, no + 1, "expected 4 tab-separated fields"));
        }
        let num = |s: &str, what: &str| {
            s.trim()
                .parse::<usize>()
                .map_err(|e| Error::parse(path, no + 1, format!("bad {what}: {e}")))
        };
        let (u, i, r) = (num(f[0], "userID")?, num(f[1], "itemID")?, num(f[2], "rating")?);
        num(f[3], "timestamp")?;
        if u == 0 || i == 0 {
            return Err(Error::parse(path, no + 1, "ids are 1-based"));
        }
        if r < 1 || r > r_max as usize {
            return Err(Error::parse(path, no + 1, format!("rating {r} outside 1..={r_max}")));
        }
        users = users.max(u);
        items = items.max(i);
        entries.push((u - 1, i - 1, r as u8));
    }
    if entries.is_empty() {
        return Err(Error::EmptyTrainingSet);
    }
    RatingsMatrix::new(users, items, r_max, entries)
}

/// Synthetic ratings from two user populations. Population 0 rates the
/// first half of the items around 2 and the second half around 4;
/// population 1 the other way round. Each item is observed with
/// probability `observe_prob`; a rating is the population mean shifted by
/// -1 or +1 with probability `jitter / 2` each, clamped to `1..=5`.
/// Returns the ratings and each user's population.
pub fn two_population_ratings(
    users: usize,
    items: usize,
    observe_prob: f64,
    jitter: f64,
    seed: u64,
) -> Result<(RatingsMatrix, Vec<usize>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut entries = Vec::new();
    let mut population = Vec::with_capacity(users);
    for u in 0..users {
        let pop = rng.gen_range(0..2usize);
        population.push(pop);
        let mut any = false;
        for i in 0..items {
            if !rng.gen_bool(observe_prob) {
                continue;
            }
            let first_half = i < items / 2;
            let mean: i32 = if first_half == (pop == 0) { 2 } else { 4 };
            let shift = match rng.gen::<f64>() {
                x if x < jitter / 2.0 => -1,
                x if x < jitter => 1,
                _ => 0,
            };
            entries.push((u, i, (mean + shift).clamp(1, 5) as u8));
            any = true;
        }
        if !any {
            let i = rng.gen_range(0..items);
            let mean = if (i < items / 2) == (pop == 0) { 2 } else { 4 };
            entries.push((u, i, mean));
        }
    }
    Ok((RatingsMatrix::new(users, items, 5, entries)?, population))
}
