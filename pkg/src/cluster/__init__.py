"""d-簇范畴 C_d(A_n) 上的子范畴演算、余挠对与心"""
