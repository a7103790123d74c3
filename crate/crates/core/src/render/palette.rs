pub const BACKGROUND: [u8; 3] = [255, 255, 255];
pub(crate) const INK: [u8; 3] = [0, 0, 0];

/// Indexed by `floor(log2(count))`; luminance strictly decreases, so denser
/// pixels are darker.
pub const DENSITY_PALETTE: [[u8; 3]; 32] = [
    [255, 244, 180], [255, 233, 157], [255, 222, 134], [254, 211, 112],
    [254, 201, 89], [252, 185, 71], [248, 166, 58], [244, 147, 45],
    [239, 128, 31], [235, 110, 21], [228, 98, 26], [221, 85, 31],
    [213, 72, 36], [206, 60, 41], [195, 50, 47], [183, 42, 53],
    [171, 34, 59], [159, 26, 65], [146, 19, 71], [132, 17, 76],
    [118, 15, 80], [104, 13, 85], [90, 10, 89], [79, 9, 84],
    [68, 8, 77], [57, 7, 71], [46, 7, 64], [37, 6, 56],
    [30, 5, 47], [22, 5, 38], [15, 4, 29], [8, 4, 20],
];

/// Cycled by rank for orbit orders and region labels.
const CATEGORY_PALETTE: [[u8; 3]; 12] = [
    [235, 82, 82], [82, 235, 158], [235, 82, 235], [158, 235, 82],
    [82, 82, 235], [235, 158, 82], [82, 235, 235], [235, 82, 158],
    [82, 235, 82], [158, 82, 235], [235, 235, 82], [82, 158, 235],
];

/// Rec. 601 luma.
pub fn luminance(c: [u8; 3]) -> f64 {
    0.299 * f64::from(c[0]) + 0.587 * f64::from(c[1]) + 0.114 * f64::from(c[2])
}

pub fn density_color(count: u32) -> [u8; 3] {
    if count == 0 {
        return BACKGROUND;
    }
    DENSITY_PALETTE[count.ilog2() as usize]
}

pub fn order_color(rank: usize) -> [u8; 3] {
    CATEGORY_PALETTE[rank % CATEGORY_PALETTE.len()]
}

/// Regions are colored by `floor(log2(area))`, lightest for the smallest.
pub fn region_color(area: usize) -> [u8; 3] {
    let level = (area.max(1).ilog2() as usize).min(DENSITY_PALETTE.len() - 1);
    DENSITY_PALETTE[level]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn density_is_monotone() {
        let l: Vec<f64> = DENSITY_PALETTE.iter().map(|&c| luminance(c)).collect();
        assert!(l.windows(2).all(|w| w[0] > w[1]));
        assert!(luminance(BACKGROUND) > l[0]);
        let mut prev = luminance(density_color(0));
        for count in [1u32, 2, 3, 4, 100, 1 << 20, u32::MAX] {
            let cur = luminance(density_color(count));
            assert!(cur <= prev);
            prev = cur;
        }
    }
}
