/// Bijective packing of composite 1-indexed coordinates into a flat 1-indexed
/// range, first dimension fastest. With dims `[N, M]` this is the
/// `i + (j - 1) * N` convention used by the larger constructions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexCodec {
    dims: Vec<usize>,
}

impl IndexCodec {
    pub fn new(dims: Vec<usize>) -> Self {
        assert!(dims.iter().all(|&d| d > 0), "all dimensions must be positive");
        IndexCodec { dims }
    }

    /// Product of all dimensions.
    pub fn size(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn pack(&self, coords: &[usize]) -> usize {
        assert_eq!(coords.len(), self.dims.len());
        let mut flat = 0;
        let mut stride = 1;
        for (&c, &d) in coords.iter().zip(&self.dims) {
            assert!(1 <= c && c <= d, "coordinate {c} outside [1, {d}]");
            flat += (c - 1) * stride;
            stride *= d;
        }
        flat + 1
    }

    pub fn unpack(&self, flat: usize) -> Vec<usize> {
        assert!(1 <= flat && flat <= self.size(), "flat index {flat} outside range");
        let mut rest = flat - 1;
        self.dims
            .iter()
            .map(|&d| {
                let c = rest % d + 1;
                rest /= d;
                c
            })
            .collect()
    }
}
