"""Two small models with an exotic top: the Calkin model and W(H, K).

In the Calkin model the class of a properly infinite projection, written
∞', lies above ∞ and is compact, so ∞ ≪ ∞' even though ∞ is not compact.
"""
from cuntz.elliott import INF_PRIME, CalkinModel, demo_facts, whk_model
from cuntz.values import INF

c = CalkinModel()
print("∞ + ∞' =", c.format(c.add(INF, INF_PRIME)))
print("∞ ≪ ∞' :", c.way_below(INF, INF_PRIME))
print("∞ ≪ ∞  :", c.way_below(INF, INF))

w = whk_model()
print("W(H, K) sum:", w.format(w.add(w.closed((2,)), w.closed((3,)))))
for name in ("calkin", "whk"):
    for text, ok in demo_facts(name):
        print(f"[{'ok' if ok else 'FAILED'}] {text}")
