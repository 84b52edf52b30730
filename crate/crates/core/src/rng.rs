//! Seed-stream derivation. Every participant and every block gets its own
//! ChaCha stream so results do not depend on execution order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type SimRng = ChaCha8Rng;

/// Stream purposes within one participant.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StreamKind {
    Observer,
    Block(u8),
}

pub fn stream_rng(seed: u64, participant: u32, kind: StreamKind) -> SimRng {
    let lane = match kind {
        StreamKind::Observer => 0u64,
        StreamKind::Block(b) => 1 + b as u64,
    };
    let mut rng = SimRng::seed_from_u64(seed);
    rng.set_stream(((participant as u64) << 8) | lane);
    rng
}

/// Position of the generator within its stream, used as a replay cursor.
pub fn cursor(rng: &SimRng) -> u128 {
    rng.get_word_pos()
}
