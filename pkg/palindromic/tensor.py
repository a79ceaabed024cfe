'''
Cell indexing and the Walsh-Hadamard engine.

Cells of a 2^d table are enumerated with the FIRST variable running fastest:
cell k holds the binary vector a with a_v = bit v-1 of k.  Subsets b of
V = {1, ..., d} are indexed the same way, so the cell <-> subset map is the
identity on bit patterns and the complement of cell k is k XOR (2^d - 1),
which is simply the reversed array.

Subsets are passed around as integer bit masks.  ``subset_mask`` and
``mask_nodes`` convert to and from 1-based node tuples, ``subset_key`` and
``parse_subset_key`` to and from the strings used in JSON files ("{}", "1",
"134", ...).
'''
import numpy as np

from . import parameters
from .errors import InvalidDimensionError, InvalidArgumentError


def check_dim(d):
    if isinstance(d, bool) or int(d) != d or not 1 <= d <= parameters.max_dim:
        raise InvalidDimensionError(
            'dimension must be an integer in 1..{}, got {!r}'.format(parameters.max_dim, d))
    return int(d)


def n_cells(d):
    return 1 << check_dim(d)


def dim_of(v):
    '''
    Dimension d of a vector of length 2^d.
    '''
    size = len(v)
    d = size.bit_length() - 1
    if size < 2 or (1 << d) != size:
        raise InvalidArgumentError(
            'vector length must be a power of two >= 2, got {}'.format(size))
    return check_dim(d)


def as_vector(v, d=None):
    '''
    Copy ``v`` into a float64 array and check that its length is 2^d.
    '''
    out = np.array(v, dtype=float).ravel()
    found = dim_of(out)
    if d is not None and found != d:
        raise InvalidArgumentError(
            'expected {} entries for d={}, got {}'.format(1 << d, d, out.size))
    return out


def complement_index(k, d):
    full = n_cells(d) - 1
    if not 0 <= k <= full:
        raise InvalidArgumentError('cell index {} out of range for d={}'.format(k, d))
    return k ^ full


def popcount(k):
    return bin(k).count('1')


def cardinalities(d):
    '''
    |b| for every subset mask b = 0, ..., 2^d - 1.
    '''
    sizes = np.zeros(1, dtype=int)
    for _ in range(check_dim(d)):
        sizes = np.concatenate((sizes, sizes + 1))
    return sizes


def odd_subsets(d):
    return cardinalities(d) % 2 == 1


def parity_signs(d):
    '''
    (-1)^|a| for every cell a; the top row of the Hadamard matrix.
    '''
    return 1.0 - 2.0 * (cardinalities(d) % 2)


def cell_bits(d):
    '''
    Array of shape (2^d, d) whose row k is the binary vector of cell k.
    '''
    cells = np.arange(n_cells(d))
    return (cells[:, None] >> np.arange(d)[None, :]) & 1


def hadamard_apply(v):
    '''
    Return H_d v by the fast Walsh-Hadamard butterfly, where
    H_d[a, b] = (-1)^(a.b) in first-index-fastest order.

    Each pass pairs the entries that differ only in bit i and replaces them
    by their sum and difference, so the work is d * 2^d additions.
    '''
    x = as_vector(v)
    d = dim_of(x)
    for i in range(d):
        x = x.reshape(-1, 2, 1 << i)
        x = np.concatenate((x[:, :1, :] + x[:, 1:, :], x[:, :1, :] - x[:, 1:, :]), axis=1)
    return x.ravel()


def hadamard_inverse_apply(v):
    x = hadamard_apply(v)
    return x / x.size


def subset_mask(nodes, d=None):
    '''
    Bit mask of a collection of 1-based node labels.  Integers are taken to
    be masks already.
    '''
    if isinstance(nodes, (int, np.integer)) and not isinstance(nodes, bool):
        mask = int(nodes)
        if mask < 0 or (d is not None and mask >= 1 << d):
            raise InvalidArgumentError('subset mask {} out of range'.format(mask))
        return mask
    mask = 0
    for v in nodes:
        v = int(v)
        if v < 1 or (d is not None and v > d):
            raise InvalidArgumentError(
                'node {} outside 1..{}'.format(v, d if d is not None else '?'))
        mask |= 1 << (v - 1)
    return mask


def mask_nodes(mask):
    nodes = []
    v = 1
    while mask:
        if mask & 1:
            nodes.append(v)
        mask >>= 1
        v += 1
    return tuple(nodes)


def subset_key(mask, d):
    nodes = mask_nodes(mask)
    if not nodes:
        return '{}'
    if d <= 9:
        return ''.join(str(v) for v in nodes)
    return ','.join(str(v) for v in nodes)


def parse_subset_key(key, d):
    key = str(key).strip()
    if key in ('{}', ''):
        return 0
    if ',' in key or d > 9:
        parts = [p for p in key.split(',') if p]
    else:
        parts = list(key)
    try:
        nodes = [int(p) for p in parts]
    except ValueError:
        raise InvalidArgumentError('cannot read subset key {!r}'.format(key))
    if len(set(nodes)) != len(nodes):
        raise InvalidArgumentError('repeated node in subset key {!r}'.format(key))
    return subset_mask(nodes, d)


def embed_masks(mask):
    '''
    For a subset M with nodes m_1 < ... < m_k, the joint subset mask of each
    local index j = 0, ..., 2^k - 1 of the margin on M.
    '''
    positions = [v - 1 for v in mask_nodes(mask)]
    local = np.arange(1 << len(positions))
    out = np.zeros(local.size, dtype=int)
    for i, pos in enumerate(positions):
        out |= ((local >> i) & 1) << pos
    return out


def _as_cube(v, d):
    return np.reshape(v, (2,) * d, order='F')


def marginal_sum(v, mask, d=None):
    '''
    Sum a 2^d vector over the variables outside ``mask``.  The result is in
    the first-index-fastest order of the kept variables.
    '''
    v = np.asarray(v, dtype=float)
    d = dim_of(v) if d is None else d
    mask = subset_mask(mask, d)
    keep = [i for i in range(d) if mask >> i & 1]
    drop = tuple(i for i in range(d) if not mask >> i & 1)
    cube = _as_cube(v, d).sum(axis=drop) if drop else _as_cube(v, d)
    if not keep:
        return np.array([float(np.sum(cube))])
    return np.ravel(cube, order='F')


def expand_marginal(u, mask, d):
    '''
    Broadcast a table on the variables in ``mask`` back to all 2^d cells.
    '''
    mask = subset_mask(mask, d)
    shape = [2 if mask >> i & 1 else 1 for i in range(d)]
    cube = np.reshape(np.asarray(u, dtype=float), shape, order='F')
    return np.ravel(np.broadcast_to(cube, (2,) * d), order='F')
