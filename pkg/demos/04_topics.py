"""Topics from a toy corpus with tf-idf weighting."""
# %%
import numpy as np

from dpnmf import Hyperparams, fit
from dpnmf.data_io import CorpusCounts, normalize_columns, tfidf
from dpnmf.metrics import top_k_terms

docs = [
    "goal match striker league goal",
    "league season match referee",
    "striker transfer league season",
    "election vote parliament minister",
    "minister policy vote budget",
    "parliament budget election policy",
    "rain storm forecast wind",
    "forecast sunny wind temperature",
    "storm temperature rain flood",
]
vocab = sorted({w for d in docs for w in d.split()})
counts = np.zeros((len(vocab), len(docs)))
for j, doc in enumerate(docs):
    for word in doc.split():
        counts[vocab.index(word), j] += 1

# %%
v = normalize_columns(tfidf(CorpusCounts(counts)), "unit-l2-clip")
res = fit(v, Hyperparams(k=3, lam=0.5, eta_h=3.0, eta_w=1.0, outer_iters=500))
for i, terms in enumerate(top_k_terms(res.w, vocab, 4), 1):
    print(f"topic {i}: {' '.join(terms)}")
