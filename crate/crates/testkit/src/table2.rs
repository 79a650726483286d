//! Per-repository results of the original quality study: file count, LOC
//! and counts for LM, LC, LPL, LMC, LSC, LTCE, MNC, LLF.

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Row {
    pub name: &'static str,
    pub files: u64,
    pub loc: u64,
    pub counts: [u64; 8],
    pub total: u64,
}

const fn row(name: &'static str, files: u64, loc: u64, counts: [u64; 8], total: u64) -> Row {
    Row {
        name,
        files,
        loc,
        counts,
        total,
    }
}

pub const GITHUB: [Row; 20] = [
    row("Rl_training", 34, 8172, [102, 80, 57, 8, 36, 0, 13, 4], 300),
    row("Deer", 42, 4453, [35, 43, 22, 38, 8, 5, 60, 0], 211),
    row(
        "Dissecting-reinforcement-learning",
        45,
        4101,
        [39, 15, 12, 6, 17, 0, 17, 1],
        107,
    ),
    row("MyDeepLearning", 34, 2773, [41, 8, 13, 4, 6, 0, 18, 2], 92),
    row("Arnold", 24, 2516, [29, 15, 6, 4, 8, 12, 15, 0], 89),
    row(
        "QA-deep-learning",
        15,
        2077,
        [8, 8, 9, 17, 10, 1, 13, 1],
        67,
    ),
    row("Deep-q-rl", 41, 243, [12, 8, 10, 3, 1, 0, 21, 0], 55),
    row(
        "Stock_market_reinforcement_learning",
        5,
        454,
        [6, 5, 1, 1, 2, 14, 3, 0],
        32,
    ),
    row("Self-Driving-Car-AI", 3, 453, [2, 7, 0, 0, 0, 0, 7, 1], 17),
    row("Pytorch-dqn", 9, 489, [2, 5, 1, 0, 2, 2, 2, 1], 15),
    row("Snake-ga", 2, 342, [2, 3, 3, 0, 1, 0, 3, 0], 12),
    row("Deep-q-learning", 3, 243, [0, 3, 3, 0, 5, 0, 0, 0], 11),
    row("Qlearning4k", 10, 479, [1, 5, 4, 0, 0, 0, 1, 0], 11),
    row("DRL-FlappyBird", 5, 485, [3, 3, 0, 3, 0, 0, 1, 0], 10),
    row(
        "Tetris-deep-Q-learning-pytorch",
        4,
        415,
        [2, 1, 0, 0, 4, 1, 0, 1],
        9,
    ),
    row("Async-rl", 5, 475, [2, 1, 2, 0, 2, 0, 1, 0], 8),
    row(
        "Flappy-bird-deep-Q-learning-pytorch",
        5,
        304,
        [2, 1, 0, 0, 0, 2, 1, 1],
        7,
    ),
    row("Gym-anytrading", 8, 321, [0, 3, 0, 0, 2, 1, 0, 0], 6),
    row(
        "Q-Learning-for-Trading",
        5,
        211,
        [0, 2, 2, 0, 1, 0, 0, 0],
        5,
    ),
    row("Q-trader", 4, 143, [0, 1, 0, 0, 0, 3, 0, 0], 4),
];

pub const ACME: [Row; 4] = [
    row("Offline Agents", 9, 711, [4, 0, 2, 0, 0, 0, 5, 5], 16),
    row("Behaviour Suite", 3, 137, [0, 0, 0, 0, 0, 0, 3, 0], 3),
    row("Open Spiel", 1, 42, [1, 0, 0, 1, 0, 1, 0, 0], 3),
    row("Continuous control", 7, 413, [0, 0, 0, 0, 0, 0, 0, 0], 0),
];

/// Printed "Total" rows: (files, LOC, counts, total).
pub const GITHUB_TOTAL: (u64, u64, [u64; 8], u64) =
    (303, 29149, [288, 217, 145, 84, 105, 41, 176, 12], 1068);
pub const ACME_TOTAL: (u64, u64, [u64; 8], u64) = (20, 1303, [5, 0, 2, 1, 0, 1, 8, 5], 22);

pub fn all_rows() -> impl Iterator<Item = &'static Row> {
    GITHUB.iter().chain(ACME.iter())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rows_sum_to_their_totals() {
        for row in all_rows() {
            assert_eq!(row.counts.iter().sum::<u64>(), row.total, "{}", row.name);
        }
        let files: u64 = GITHUB.iter().map(|r| r.files).sum();
        let loc: u64 = GITHUB.iter().map(|r| r.loc).sum();
        assert_eq!((files, loc), (GITHUB_TOTAL.0, GITHUB_TOTAL.1));
        for i in 0..8 {
            assert_eq!(
                GITHUB.iter().map(|r| r.counts[i]).sum::<u64>(),
                GITHUB_TOTAL.2[i]
            );
            assert_eq!(
                ACME.iter().map(|r| r.counts[i]).sum::<u64>(),
                ACME_TOTAL.2[i]
            );
        }
        let acme_loc: u64 = ACME.iter().map(|r| r.loc).sum();
        assert_eq!(acme_loc, ACME_TOTAL.1);
    }
}
