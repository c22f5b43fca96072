//! Bit-level engine for large alarm models.
//!
//! A history of `n` total actions is packed into a `u32`: bit 0 is the first
//! morning's outcome (0 off, 1 on) and bit `j` for `1 <= j < n` is the
//! human's action on morning `j + 1` (0 reset, 1 toggle). All `2^n` packed
//! values are valid histories, and sorting them numerically is not the same
//! order as sorting their keys, so the explicit model's indices and these
//! codes are bridged through [`FastAlarm::to_history`].
//!
//! The pay-off is the machine's relation. The machine confuses two histories
//! exactly when they share a location sequence, and the location walk shows
//! which action bits the sequence ignores: those taken while the alarm was
//! on (both choices lead to off). Flipping any subset of those free bits
//! walks the whole machine class, so classes never need pairwise comparison.

use std::collections::VecDeque;

use crate::game::History;

use super::{builtin_alarm_game, off, on, profile, start, LabelCounts};

pub struct FastAlarm {
    n: usize,
    /// Per world, the mask of action bits the location sequence ignores.
    free: Vec<u32>,
    /// Per world, whether the last location is On.
    label_on: Vec<bool>,
}

impl FastAlarm {
    /// Build the `n`-morning model's masks and labels, one location walk per
    /// world.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "the packed form starts at the first morning");
        assert!(
            n <= 25,
            "2^n worlds at 4+ bytes each; past 25 this needs a different design"
        );
        let count = 1usize << n;
        let mut free = vec![0u32; count];
        let mut label_on = vec![false; count];
        for w in 0..count as u32 {
            let mut is_on = w & 1 == 1;
            let mut mask = 0u32;
            for j in 1..n {
                if is_on {
                    // Both actions turn the alarm off; the bit is free.
                    mask |= 1 << j;
                    is_on = false;
                } else {
                    is_on = w >> j & 1 == 1;
                }
            }
            free[w as usize] = mask;
            label_on[w as usize] = is_on;
        }
        Self { n, free, label_on }
    }

    pub fn steps(&self) -> usize {
        self.n
    }

    pub fn world_count(&self) -> u64 {
        1 << self.n
    }

    pub fn label_is_on(&self, world: u32) -> bool {
        self.label_on[world as usize]
    }

    pub fn on_off_counts(&self) -> LabelCounts {
        let on = self.label_on.iter().filter(|&&b| b).count() as u64;
        LabelCounts {
            on,
            off: self.world_count() - on,
        }
    }

    /// The one world the human confuses with this one: same actions, the
    /// other first-morning outcome.
    pub fn human_partner(&self, world: u32) -> u32 {
        world ^ 1
    }

    /// Every world the machine confuses with this one, ascending, including
    /// the world itself: all free-bit variations.
    pub fn machine_class(&self, world: u32) -> Vec<u32> {
        let mask = self.free[world as usize];
        let base = world & !mask;
        let mut members = Vec::with_capacity(1 << mask.count_ones());
        let mut sub = 0u32;
        loop {
            members.push(base | sub);
            if sub == mask {
                break;
            }
            sub = (sub.wrapping_sub(mask)) & mask;
        }
        members
    }

    pub fn human_pair_count(&self) -> u64 {
        // Partnering is a perfect matching over the 2^n worlds.
        self.world_count() / 2
    }

    pub fn machine_pair_count(&self) -> u64 {
        // Each world sees 2^popcount(free) - 1 classmates; halve the total
        // to count unordered pairs.
        self.free
            .iter()
            .map(|m| (1u64 << m.count_ones()) - 1)
            .sum::<u64>()
            / 2
    }

    /// Distance from the all-resets world (code 0) to the nearest on-world,
    /// stepping through either agent's confusion. `None` only if no on-world
    /// is reachable, which no alarm model exhibits.
    ///
    /// Machine classes are cliques, so each class is expanded once and then
    /// retired; the whole search is linear in the world count.
    pub fn distance_to_on(&self) -> Option<usize> {
        let count = 1usize << self.n;
        let mut dist = vec![u32::MAX; count];
        let mut class_done = vec![false; count];
        let mut queue = VecDeque::new();
        dist[0] = 0;
        queue.push_back(0u32);
        while let Some(w) = queue.pop_front() {
            let d = dist[w as usize];
            if self.label_on[w as usize] {
                return Some(d as usize);
            }
            let partner = self.human_partner(w);
            if dist[partner as usize] == u32::MAX {
                dist[partner as usize] = d + 1;
                queue.push_back(partner);
            }
            let key = (w & !self.free[w as usize]) as usize;
            if !class_done[key] {
                class_done[key] = true;
                for member in self.machine_class(w) {
                    if dist[member as usize] == u32::MAX {
                        dist[member as usize] = d + 1;
                        queue.push_back(member);
                    }
                }
            }
        }
        None
    }

    /// Unpack a code into the explicit history form.
    pub fn to_history(&self, world: u32) -> History {
        let game = builtin_alarm_game();
        let mut h = History::initial(start());
        let first = if world & 1 == 1 { on() } else { off() };
        h = game.extend(&h, profile("i"), first).expect("first morning");
        for j in 1..self.n {
            let toggled = world >> j & 1 == 1;
            let act = if toggled { "t" } else { "r" };
            let to = if !toggled || *h.last() == on() {
                off()
            } else {
                on()
            };
            h = game.extend(&h, profile(act), to).expect("alarm transition");
        }
        h
    }

    /// Pack an explicit history, if it is an `n`-morning alarm history.
    pub fn from_history(&self, h: &History) -> Option<u32> {
        if h.len() != self.n {
            return None;
        }
        let mut code = 0u32;
        if *h.location_at(1)? == on() {
            code |= 1;
        }
        for (j, (p, _)) in h.steps().iter().enumerate().skip(1) {
            if p.action(0)?.as_str() == "t" {
                code |= 1 << j;
            }
        }
        // Round-tripping rejects histories whose locations or actions do not
        // actually follow the game (a wrong init step, a misplaced outcome).
        (self.to_history(code) == *h).then_some(code)
    }
}
