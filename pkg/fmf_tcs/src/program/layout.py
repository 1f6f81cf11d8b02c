import numpy as np

LN2 = float(np.log(2.0))

BLOCKS = ('C', 'R', 'P', 'M', 'W', 'T', 'b')

class VariableLayout:
    """
    Index map of the log-domain variables.

    Per request q: C = ln c, R = ln r, P = ln p, M = ln m, W = ln omega,
    T = ln t and b (untransformed), stored block by block. Then one D = ln d
    per ordered pair of requests with shared spans.
    """
    def __init__(self, request_ids:tuple, pairs:list[tuple[int, int]]):
        self.request_ids = tuple(request_ids)
        self.n = len(self.request_ids)
        self.pairs = list(pairs)
        offset = len(BLOCKS)*self.n
        self.pair_index = {pair: offset + k for k, pair in enumerate(self.pairs)}
        self.size = offset + len(self.pairs)

    def idx(self, block:str, q:int) -> int:
        return BLOCKS.index(block)*self.n + q

    def block(self, block:str) -> slice:
        start = BLOCKS.index(block)*self.n
        return slice(start, start + self.n)

    def d(self, q:int, i:int) -> int:
        return self.pair_index[(q, i)]

    @property
    def d_slice(self) -> slice:
        return slice(len(BLOCKS)*self.n, self.size)

    def names(self) -> list[str]:
        names = []
        for block in BLOCKS:
            names += [f'{block}[{rid}]' for rid in self.request_ids]
        names += [f'D[{self.request_ids[q]},{self.request_ids[i]}]' for q, i in self.pairs]
        return names
