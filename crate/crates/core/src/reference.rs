//! Reference rule tables, kept as fixtures for checking the derived ones.
//!
//! Nothing in the library computes with these; they are compared against the
//! tables derived in [`crate::classes`] and [`crate::rule`].

use crate::classes::RuleClass::{self, *};

/// The reversible rules.
pub const REVERSIBLE_RULES: [u8; 62] = [
    15, 23, 27, 30, 39, 43, 45, 51, 53, 54, 57, //
    58, 60, 75, 77, 78, 83, 85, 86, 89, 90, 92, //
    99, 101, 102, 105, 106, 108, 113, 114, 120, 135, 141, //
    142, 147, 149, 150, 153, 154, 156, 163, 165, 166, 169, //
    170, 172, 177, 178, 180, 195, 197, 198, 201, 202, 204, //
    210, 212, 216, 225, 228, 232, 240,
];

pub const BALANCED_IRREVERSIBLE_RULES: [u8; 8] = [29, 46, 71, 116, 139, 184, 209, 226];

/// Member rules of each class.
pub const CLASS_MEMBERS: [(RuleClass, &[u8]); 6] = [
    (
        I,
        &[
            51, 53, 54, 57, 58, 60, 83, 85, 86, 89, 90, 92, 99, 101, 102, 105, 106, 108, 147, 149,
            150, 153, 154, 156, 163, 165, 166, 169, 170, 172, 195, 197, 198, 201, 202, 204,
        ],
    ),
    (
        II,
        &[
            15, 30, 45, 60, 75, 90, 105, 120, 135, 150, 165, 180, 195, 210, 225, 240,
        ],
    ),
    (
        III,
        &[
            15, 23, 27, 39, 43, 51, 77, 78, 85, 86, 89, 90, 101, 102, 105, 106, 113, 114, 141, 142,
            149, 150, 153, 154, 165, 166, 169, 170, 177, 178, 204, 212, 216, 228, 232, 240,
        ],
    ),
    (IV, &[60, 90, 105, 150, 165, 195]),
    (
        V,
        &[
            51, 85, 86, 89, 90, 101, 102, 105, 106, 149, 150, 153, 154, 165, 166, 169, 170, 204,
        ],
    ),
    (VI, &[15, 90, 105, 150, 165, 240]),
];

/// `(class of R(i), rules R(i), class of R(i+1))`.
pub const CLASS_TRANSITIONS: [(RuleClass, &[u8], RuleClass); 23] = [
    (I, &[51, 60, 195, 204], I),
    (I, &[85, 90, 165, 170], II),
    (I, &[102, 105, 150, 153], III),
    (I, &[53, 58, 83, 92, 163, 172, 197, 202], IV),
    (I, &[54, 57, 99, 108, 147, 156, 198, 201], V),
    (I, &[86, 89, 101, 106, 149, 154, 166, 169], VI),
    (
        II,
        &[
            15, 30, 45, 60, 75, 90, 105, 120, 135, 150, 165, 180, 195, 210, 225, 240,
        ],
        I,
    ),
    (III, &[15, 51, 204, 240], I),
    (III, &[85, 105, 150, 170], II),
    (III, &[90, 102, 153, 165], III),
    (III, &[23, 43, 77, 113, 142, 178, 212, 232], IV),
    (III, &[27, 39, 78, 114, 141, 177, 216, 228], V),
    (III, &[86, 89, 101, 106, 149, 154, 166, 169], VI),
    (IV, &[60, 195], I),
    (IV, &[90, 165], IV),
    (IV, &[105, 150], V),
    (V, &[51, 204], I),
    (V, &[85, 170], II),
    (V, &[102, 153], III),
    (
        V,
        &[86, 89, 90, 101, 105, 106, 149, 150, 154, 165, 166, 169],
        VI,
    ),
    (VI, &[15, 240], I),
    (VI, &[105, 150], IV),
    (VI, &[90, 165], V),
];

/// First-cell rules (upper nibble zero) and the class they give the second cell.
pub const FIRST_RULES: [(&[u8], RuleClass); 3] = [(&[3, 12], I), (&[5, 10], II), (&[6, 9], III)];

/// Last-cell rules (odd RMTs zero) accepted after each class.
pub const LAST_RULES: [(RuleClass, &[u8]); 6] = [
    (I, &[17, 20, 65, 68]),
    (II, &[5, 20, 65, 80]),
    (III, &[5, 17, 68, 80]),
    (IV, &[20, 65]),
    (V, &[17, 68]),
    (VI, &[5, 80]),
];
