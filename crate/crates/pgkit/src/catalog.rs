//! Named graph strings for well-known principal graphs and weeds.

/// Izumi-Xu 2221 pair; both graphs coincide.
pub const PAIR_2221: (&str, &str) = ("bwd1v1v1p1p1v1x0x0p0x1x0duals1v1v2x1", "bwd1v1v1p1p1v1x0x0p0x1x0duals1v1v2x1");

/// Haagerup pair.
pub const HAAGERUP: (&str, &str) = ("bwd1v1v1v1p1v1x0p0x1v1x0p0x1duals1v1v1x2v2x1", "bwd1v1v1v1p1v1x0p1x0duals1v1v1x2");

/// Extended Haagerup pair.
pub const EXTENDED_HAAGERUP: (&str, &str) =
    ("bwd1v1v1v1v1v1v1v1p1v1x0p0x1v1x0p0x1duals1v1v1v1v1x2v2x1", "bwd1v1v1v1v1v1v1v1p1v1x0p1x0duals1v1v1v1v1x2");

/// Asaeda-Haagerup pair.
pub const ASAEDA_HAAGERUP: (&str, &str) = (
    "bwd1v1v1v1v1v1p1v1x0p0x1v1x0p0x1p0x1v1x0x0v1duals1v1v1v1x2v2x1x3v1",
    "bwd1v1v1v1v1v1p1v0x1p0x1v0x1v1duals1v1v1v1x2v1",
);

/// The annular multiplicities *10 weed and its dual orientation.
pub const STAR10: (&str, &str) = ("gbg1v1p1v1x0p0x1", "gbg1v1p1v1x0p1x0");

/// One triple point with three arms of length three, the base of the translated-extension family
/// whose members are H and EH.
pub const THREE_ARMS: &str = "gbg1v1p1v1x0p0x1v1x0p0x1";

/// Simply laced spoke graphs.
pub const SPOKE_2221: &str = "gbg1v1v1p1p1v1x0x0p0x1x0";
pub const SPOKE_3311: &str = "gbg1v1v1v1p1p1v1x0x0v1";
pub const SPOKE_3333: &str = "gbg1v1v1v1p1p1v1x0x0p0x1x0p0x0x1v1x0x0p0x1x0p0x0x1";
pub const SPOKE_4442: &str = "gbg1v1v1v1v1p1p1v1x0x0p0x1x0p0x0x1v0x1x0p0x0x1v1x0p0x1";

/// Candidate self-dual pairs for index in (5, 3+√5).
pub const INDEX_5_TO_3_PLUS_SQRT5: [&str; 2] =
    ["bwd1v1p1v1x1p0x1duals1v1x2", "bwd1v1v1p1v1x0p0x1p0x1v0x1x0p1x0x1duals1v1v2x1x3"];

/// Every distinct graph string above, with vertex and edge counts read off the drawn figures.
pub const FIXTURES: [(&str, usize, u32); 16] = [
    ("bwd1v1p1v1x1p0x1duals1v1x2", 6, 6),
    ("bwd1v1v1p1p1v1x0x0p0x1x0duals1v1v2x1", 8, 7),
    ("bwd1v1v1p1v1x0p0x1p0x1v0x1x0p1x0x1duals1v1v2x1x3", 10, 10),
    ("bwd1v1v1v1p1v1x0p0x1v1x0p0x1duals1v1v1x2v2x1", 10, 9),
    ("bwd1v1v1v1p1v1x0p1x0duals1v1v1x2", 8, 7),
    ("bwd1v1v1v1v1v1p1v0x1p0x1v0x1v1duals1v1v1v1x2v1", 12, 11),
    ("bwd1v1v1v1v1v1p1v1x0p0x1v1x0p0x1p0x1v1x0x0v1duals1v1v1v1x2v2x1x3v1", 15, 14),
    ("bwd1v1v1v1v1v1v1v1p1v1x0p0x1v1x0p0x1duals1v1v1v1v1x2v2x1", 14, 13),
    ("bwd1v1v1v1v1v1v1v1p1v1x0p1x0duals1v1v1v1v1x2", 12, 11),
    ("gbg1v1p1v1x0p0x1", 6, 5),
    ("gbg1v1p1v1x0p0x1v1x0p0x1", 8, 7),
    ("gbg1v1p1v1x0p1x0", 6, 5),
    ("gbg1v1v1p1p1v1x0x0p0x1x0", 8, 7),
    ("gbg1v1v1v1p1p1v1x0x0p0x1x0p0x0x1v1x0x0p0x1x0p0x0x1", 13, 12),
    ("gbg1v1v1v1p1p1v1x0x0v1", 9, 8),
    ("gbg1v1v1v1v1p1p1v1x0x0p0x1x0p0x0x1v0x1x0p0x0x1v1x0p0x1", 15, 14),
];
