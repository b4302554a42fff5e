"""Source パッケージ"""
