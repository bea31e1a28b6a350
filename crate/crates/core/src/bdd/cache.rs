//! Lossy direct-mapped computed table.

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[repr(u32)]
pub(super) enum Op {
    Not = 1,
    And,
    Or,
    Xor,
    Ite,
    Exists,
    AndExists,
    Swap,
    RestrictLo,
    RestrictHi,
}

#[derive(Clone, Copy)]
struct Entry {
    op: u32,
    a: u32,
    b: u32,
    c: u32,
    r: u32,
}

const EMPTY: Entry = Entry { op: 0, a: 0, b: 0, c: 0, r: 0 };
const MAX_BITS: u32 = 24;

pub(super) struct Cache {
    entries: Vec<Entry>,
    mask: usize,
}

impl Cache {
    pub fn new(size: usize) -> Self {
        let size = size.next_power_of_two();
        Cache { entries: vec![EMPTY; size], mask: size - 1 }
    }

    pub fn capacity(&self) -> usize {
        self.entries.len()
    }

    /// Doubles the table (dropping its contents) up to a fixed ceiling.
    pub fn grow(&mut self) {
        if self.entries.len() >= 1 << MAX_BITS {
            return;
        }
        *self = Cache::new(self.entries.len() * 2);
    }

    #[inline]
    fn slot(&self, op: Op, a: u32, b: u32, c: u32) -> usize {
        let mut h = (op as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15);
        h ^= (a as u64).wrapping_mul(0xC2B2_AE3D_27D4_EB4F);
        h = h.rotate_left(23) ^ (b as u64).wrapping_mul(0x1656_67B1_9E37_79F9);
        h = h.rotate_left(29) ^ (c as u64).wrapping_mul(0x27D4_EB2F_1656_67C5);
        h ^= h >> 31;
        (h as usize) & self.mask
    }

    #[inline]
    pub fn get(&self, op: Op, a: u32, b: u32, c: u32) -> Option<u32> {
        let e = &self.entries[self.slot(op, a, b, c)];
        if e.op == op as u32 && e.a == a && e.b == b && e.c == c {
            Some(e.r)
        } else {
            None
        }
    }

    #[inline]
    pub fn put(&mut self, op: Op, a: u32, b: u32, c: u32, r: u32) {
        let i = self.slot(op, a, b, c);
        self.entries[i] = Entry { op: op as u32, a, b, c, r };
    }
}
