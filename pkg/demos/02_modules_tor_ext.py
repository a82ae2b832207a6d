"""Finitely presented modules and the derived functor calculus.

Run with:  python demos/02_modules_tor_ext.py
"""

from lodua import (FPModule, ModuleMap, ext, free_resolution, iso_check,
                   make_ring, subquotient, tensor, tor)

Z = make_ring({"base": "Z"})
Zmod = lambda n: FPModule.cyclic(Z, [n])

print("== subquotients ==")
f = ModuleMap(Zmod(6), Zmod(6), [[Z.el(2)]])
K, incl = subquotient(f, "kernel")
print("kernel of 2 on Z/6:", K.describe(), " (generated by 3)")

print("\n== Tor and Ext over Z ==")
print("Tor_1(Z/4, Z/6) =", tor(Zmod(4), Zmod(6), 1).describe())
print("Ext^1(Z/5, Z)   =", ext(Zmod(5), FPModule.free(Z, 1), 1).describe())

print("\n== the Koszul resolution of k over k[x,y] ==")
Q = make_ring({"base": "Q", "vars": ["x", "y"]})
k = FPModule.cyclic(Q, ["x", "y"])
res = free_resolution(k, 2)
print("ranks:", [res.module(i).ngens for i in (0, 1, 2)], " (1, 2, 1)")
t1 = tor(k, k, 1)
print("Tor_1(k, k) has", t1.ngens, "generators killed by (x, y): k^2")

print("\n== isomorphism checking ==")
from lodua.modules import direct_sum
S, _, _ = direct_sum(Zmod(2), Zmod(3))
print("Z/2 + Z/3 = Z/6:", bool(iso_check(S, Zmod(6))))
S2, _, _ = direct_sum(Zmod(2), Zmod(2))
print("Z/2 + Z/2 = Z/4:", bool(iso_check(S2, Zmod(4))))
