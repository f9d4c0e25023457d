"""Test suite for fibgates"""
