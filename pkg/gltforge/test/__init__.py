'''
Created on 18 Oct 2026

@author: gltforge developers
'''
